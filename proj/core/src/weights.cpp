#include "ope/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ope {
namespace {

bool needs_log_space(std::span<const double> ratios) {
  for (double f : ratios) {
    if (f != 0.0 && (f > 1e3 || f < 1e-3)) return true;
  }
  return false;
}

double checked_ratio(double evaluation, double behavior, std::size_t t) {
  if (!(behavior > 0.0)) {
    throw std::invalid_argument("recorded behavior probability at step " + std::to_string(t) +
                                " is not positive");
  }
  return evaluation / behavior;
}

}  // namespace

std::vector<double> direct_cumulative_weights(std::span<const double> ratios) {
  std::vector<double> out(ratios.size());
  double running = 1.0;
  for (std::size_t t = 0; t < ratios.size(); ++t) out[t] = (running *= ratios[t]);
  return out;
}

std::vector<double> cumulative_weights(std::span<const double> ratios) {
  if (!needs_log_space(ratios)) return direct_cumulative_weights(ratios);
  std::vector<double> out(ratios.size(), 0.0);
  double log_weight = 0.0;
  for (std::size_t t = 0; t < ratios.size(); ++t) {
    if (ratios[t] == 0.0) break;
    log_weight += std::log(ratios[t]);
    out[t] = std::exp(log_weight);
  }
  return out;
}

WeightedTrajectory weigh(const Trajectory& trajectory, const PrimitivePolicy& evaluation) {
  trajectory.validate();
  WeightedTrajectory out;
  out.rewards = trajectory.rewards;
  out.ratios.resize(trajectory.size());
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    out.ratios[t] =
        checked_ratio(evaluation.probability(trajectory.observations[t], trajectory.actions[t]),
                      trajectory.behavior_probs[t], t);
  }
  return out;
}

WeightedData weigh(const Dataset& data, const PrimitivePolicy& evaluation) {
  WeightedData out;
  out.reserve(data.size());
  for (const auto& t : data.trajectories) out.push_back(weigh(t, evaluation));
  return out;
}

WeightedTrajectory weigh(const HighLevelTrajectory& trajectory, const OptionsPolicy& evaluation,
                         const std::set<OptionId>& changed) {
  trajectory.validate();
  WeightedTrajectory out;
  const auto n = trajectory.flat_size();
  out.rewards.reserve(n);
  out.ratios.reserve(n);
  for (const auto& segment : trajectory.segments) {
    const auto& steps = segment.steps;
    const auto index = evaluation.find(segment.option);
    const double option_probability =
        index ? evaluation.probability(segment.start_observation, segment.option) : 0.0;
    const double option_ratio =
        checked_ratio(option_probability, segment.option_probability, out.ratios.size());
    const bool is_changed = changed.contains(segment.option);
    for (std::size_t b = 0; b < steps.size(); ++b) {
      double ratio = b == 0 ? option_ratio : 1.0;
      if (is_changed && option_ratio != 0.0) {
        const double pe = evaluation.option(*index).sub_policy.probability(steps.observations[b],
                                                                           steps.actions[b]);
        ratio *= checked_ratio(pe, steps.behavior_probs[b], out.ratios.size());
      }
      out.rewards.push_back(steps.rewards[b]);
      out.ratios.push_back(ratio);
    }
  }
  return out;
}

WeightedData weigh(const OptionsDataset& data, const OptionsPolicy& evaluation,
                   const std::set<OptionId>& changed) {
  WeightedData out;
  out.reserve(data.size());
  for (const auto& t : data.trajectories) out.push_back(weigh(t, evaluation, changed));
  return out;
}

}  // namespace ope
