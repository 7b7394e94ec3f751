#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ope/types.hpp"

namespace ope {

// One logged episode. `behavior_probs[t]` is the behavior policy's probability
// of `actions[t]` at `observations[t]`, recorded when the data was generated.
struct Trajectory {
  std::vector<ObservationId> observations;
  std::vector<ActionId> actions;
  std::vector<double> rewards;
  std::vector<double> behavior_probs;

  std::size_t size() const { return actions.size(); }
  double total_return() const;
  // Throws std::invalid_argument on misaligned sequences or a non-positive
  // behavior probability.
  void validate() const;

  bool operator==(const Trajectory&) const = default;
};

// One option execution inside a high-level trajectory.
struct Segment {
  OptionId option;
  double option_probability = 0.0;  // behavior probability of choosing `option`
  ObservationId start_observation = 0;
  Trajectory steps;                 // sub-policy probabilities in behavior_probs
  double accumulated_reward = 0.0;  // sum of steps.rewards
  bool truncated = false;           // force-terminated by the horizon cap

  bool operator==(const Segment&) const = default;
};

struct HighLevelTrajectory {
  std::vector<Segment> segments;

  std::size_t size() const { return segments.size(); }
  std::size_t flat_size() const;
  double total_return() const;
  // Flat index of each segment's first step.
  std::vector<std::size_t> segment_starts() const;
  void validate() const;

  bool operator==(const HighLevelTrajectory&) const = default;
};

// Concatenates the segments. Each flat behavior probability is the probability
// of the logged decision at that step: the option's probability is folded into
// the first step of its segment, so products over the flat trajectory equal the
// behavior probability of the high-level trajectory. Throws on no segments.
Trajectory flatten(const HighLevelTrajectory& trajectory);

// Enough to regenerate a dataset bit-identically: serialized environment and
// behavior-policy specs plus the master seed.
struct DatasetMetadata {
  std::string environment;
  std::string behavior_policy;
  std::uint64_t seed = 0;

  bool operator==(const DatasetMetadata&) const = default;
};

struct Dataset {
  DatasetMetadata metadata;
  std::vector<Trajectory> trajectories;

  std::size_t size() const { return trajectories.size(); }
};

struct OptionsDataset {
  DatasetMetadata metadata;
  std::vector<HighLevelTrajectory> trajectories;

  std::size_t size() const { return trajectories.size(); }
};

Dataset flatten(const OptionsDataset& data);

}  // namespace ope
