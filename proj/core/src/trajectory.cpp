#include "ope/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace ope {

double Trajectory::total_return() const {
  double total = 0.0;
  for (double r : rewards) total += r;
  return total;
}

void Trajectory::validate() const {
  const auto n = actions.size();
  if (observations.size() != n || rewards.size() != n || behavior_probs.size() != n) {
    throw std::invalid_argument("trajectory sequences have different lengths");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!(behavior_probs[t] > 0.0) || behavior_probs[t] > 1.0) {
      throw std::invalid_argument("behavior probability at step " + std::to_string(t) +
                                  " is not in (0, 1]");
    }
    if (!std::isfinite(rewards[t])) {
      throw std::invalid_argument("reward at step " + std::to_string(t) + " is not finite");
    }
  }
}

std::size_t HighLevelTrajectory::flat_size() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.steps.size();
  return n;
}

double HighLevelTrajectory::total_return() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.accumulated_reward;
  return total;
}

std::vector<std::size_t> HighLevelTrajectory::segment_starts() const {
  std::vector<std::size_t> starts;
  starts.reserve(segments.size());
  std::size_t at = 0;
  for (const auto& s : segments) {
    starts.push_back(at);
    at += s.steps.size();
  }
  return starts;
}

void HighLevelTrajectory::validate() const {
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& s = segments[k];
    const std::string where = "segment " + std::to_string(k);
    s.steps.validate();
    if (s.steps.size() == 0) throw std::invalid_argument(where + " is empty");
    if (!(s.option_probability > 0.0) || s.option_probability > 1.0) {
      throw std::invalid_argument(where + " has option probability outside (0, 1]");
    }
    if (s.steps.observations.front() != s.start_observation) {
      throw std::invalid_argument(where + " does not start at its start observation");
    }
    if (s.accumulated_reward != s.steps.total_return()) {
      throw std::invalid_argument(where + " accumulated reward disagrees with its steps");
    }
  }
}

Trajectory flatten(const HighLevelTrajectory& trajectory) {
  if (trajectory.segments.empty()) {
    throw std::invalid_argument("cannot flatten a high-level trajectory without segments");
  }
  Trajectory flat;
  const auto n = trajectory.flat_size();
  flat.observations.reserve(n);
  flat.actions.reserve(n);
  flat.rewards.reserve(n);
  flat.behavior_probs.reserve(n);
  for (const auto& s : trajectory.segments) {
    const auto& sub = s.steps;
    const auto first = flat.behavior_probs.size();
    flat.observations.insert(flat.observations.end(), sub.observations.begin(),
                             sub.observations.end());
    flat.actions.insert(flat.actions.end(), sub.actions.begin(), sub.actions.end());
    flat.rewards.insert(flat.rewards.end(), sub.rewards.begin(), sub.rewards.end());
    flat.behavior_probs.insert(flat.behavior_probs.end(), sub.behavior_probs.begin(),
                               sub.behavior_probs.end());
    if (first < flat.behavior_probs.size()) flat.behavior_probs[first] *= s.option_probability;
  }
  return flat;
}

Dataset flatten(const OptionsDataset& data) {
  Dataset flat{data.metadata, {}};
  flat.trajectories.reserve(data.size());
  for (const auto& t : data.trajectories) flat.trajectories.push_back(flatten(t));
  return flat;
}

}  // namespace ope
