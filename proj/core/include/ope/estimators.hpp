#pragma once

#include <functional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ope/policy.hpp"
#include "ope/trajectory.hpp"
#include "ope/weights.hpp"

namespace ope {

enum class Estimator { is, pdis, wis, cwpdis, options_pdis, partitioned_pdis, incris };

std::string_view to_string(Estimator estimator);
// Throws ConfigError for an unknown id.
Estimator parse_estimator(std::string_view id);
std::span<const Estimator> all_estimators();

struct EstimateDiagnostics {
  // Computed from each trajectory's final cumulative weight.
  double effective_sample_size = 0.0;
  double max_weight = 0.0;
  // INCRIS only: number of most recent ratios kept for the reward at each step.
  std::vector<int> chosen_suffix_lengths;
};

struct EstimateReport {
  Estimator estimator = Estimator::pdis;
  double estimate = 0.0;
  std::size_t n = 0;
  EstimateDiagnostics diagnostics;
};

// All estimators below are pure functions of their inputs and throw
// std::invalid_argument on an empty dataset. Trajectories of different lengths
// are treated as padded with zero rewards and unit ratios where a per-step
// alignment is needed (CWPDIS, INCRIS).

// (1/n) sum_i rho_H^(i) G^(i).
EstimateReport is_estimate(std::span<const WeightedTrajectory> data);
// (1/n) sum_i sum_t rho_t^(i) r_t^(i).
EstimateReport pdis_estimate(std::span<const WeightedTrajectory> data);
// sum_i rho_H G / sum_i rho_H, or 0 when every weight is 0.
EstimateReport wis_estimate(std::span<const WeightedTrajectory> data);
// Consistent weighted PDIS: sum_t [sum_i rho_t r_t / sum_i rho_t]; a step whose
// weights sum to 0 contributes 0.
EstimateReport cwpdis_estimate(std::span<const WeightedTrajectory> data);
// PDIS on the steps before cuts[i] plus PDIS, with weights restarted at 1, on
// the steps from cuts[i] on. Throws std::invalid_argument for cuts past the end.
EstimateReport partitioned_pdis_estimate(std::span<const WeightedTrajectory> data,
                                         std::span<const std::size_t> cuts);
// Incremental importance sampling; see incris.cpp. Needs at least two trajectories.
EstimateReport incris_estimate(std::span<const WeightedTrajectory> data);

EstimateReport is_estimate(const Dataset& data, const PrimitivePolicy& evaluation);
EstimateReport pdis_estimate(const Dataset& data, const PrimitivePolicy& evaluation);
EstimateReport wis_estimate(const Dataset& data, const PrimitivePolicy& evaluation);
EstimateReport cwpdis_estimate(const Dataset& data, const PrimitivePolicy& evaluation);
EstimateReport incris_estimate(const Dataset& data, const PrimitivePolicy& evaluation);

// Maps a trajectory to the index of its first step after the partition point.
using CutFn = std::function<std::size_t(const Trajectory&)>;
EstimateReport partitioned_pdis_estimate(const Dataset& data, const PrimitivePolicy& evaluation,
                                         const CutFn& cut);

// One option execution as seen by options-based PDIS.
struct OptionWeightedSegment {
  // Product of option ratios mu_e / mu_b up to and including this segment.
  double option_weight = 1.0;
  // Product of full sub-policy ratios of earlier changed segments.
  double carried_weight = 1.0;
  // The segment's reward sum for unchanged options, otherwise the inner
  // per-decision sum over its steps.
  double payoff = 0.0;
  bool changed = false;
};

std::vector<OptionWeightedSegment> option_weighted_segments(const HighLevelTrajectory& trajectory,
                                                            const OptionsPolicy& evaluation,
                                                            const std::set<OptionId>& changed);

// PDIS over options: (1/n) sum_i sum_t w_t y_t (times the carried sub-policy
// weight of earlier changed options). With `changed` empty only option
// ratios appear. Options missing from the evaluation policy get weight 0.
EstimateReport options_pdis_estimate(const OptionsDataset& data, const OptionsPolicy& evaluation,
                                     const std::set<OptionId>& changed = {});

// Sample covariance of W1 and W2 r: the bias of dropping W1 (when E[W1] = 1)
// from the estimate W1 W2 r. Needs at least two samples.
double covariance_split_bias(std::span<const double> w1, std::span<const double> w2r);

}  // namespace ope
