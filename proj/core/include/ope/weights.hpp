#pragma once

#include <set>
#include <span>
#include <vector>

#include "ope/policy.hpp"
#include "ope/trajectory.hpp"

namespace ope {

// Rewards of one trajectory with the per-step importance ratios
// pi_e(a_t | o_t) / pi_b(a_t | o_t) of its logged decisions.
struct WeightedTrajectory {
  std::vector<double> rewards;
  std::vector<double> ratios;

  std::size_t size() const { return rewards.size(); }
};

using WeightedData = std::vector<WeightedTrajectory>;

// Cumulative products rho_t = ratios[0] * ... * ratios[t]. Switches to log space
// when any nonzero factor exceeds 1e3 or falls below 1e-3; a zero factor zeroes
// every later weight.
std::vector<double> cumulative_weights(std::span<const double> ratios);
// Same products, always multiplied directly.
std::vector<double> direct_cumulative_weights(std::span<const double> ratios);

// Ratios of a primitive evaluation policy against the recorded behavior
// probabilities. Throws std::invalid_argument on a non-positive recorded probability.
WeightedTrajectory weigh(const Trajectory& trajectory, const PrimitivePolicy& evaluation);
WeightedData weigh(const Dataset& data, const PrimitivePolicy& evaluation);

// Ratios of the decisions logged in an options trajectory, aligned with the
// flattened steps. The first step of each segment carries the option ratio
// mu_e / mu_b; steps of options listed in `changed` also carry their sub-policy
// ratio, other sub-policy steps have ratio 1. Options missing from the
// evaluation policy get ratio 0.
WeightedTrajectory weigh(const HighLevelTrajectory& trajectory, const OptionsPolicy& evaluation,
                         const std::set<OptionId>& changed);
WeightedData weigh(const OptionsDataset& data, const OptionsPolicy& evaluation,
                   const std::set<OptionId>& changed);

}  // namespace ope
