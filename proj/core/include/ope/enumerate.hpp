#pragma once

#include <cstddef>
#include <functional>

#include "ope/mdp.hpp"
#include "ope/policy.hpp"
#include "ope/trajectory.hpp"

namespace ope {

inline constexpr std::size_t kEnumerationLimit = 1'000'000;

using TrajectoryVisitor = std::function<void(const Trajectory&, double probability)>;
using OptionsTrajectoryVisitor =
    std::function<void(const HighLevelTrajectory&, double probability)>;

// Number of positive-probability outcome paths (initial state, observations,
// actions, transitions), stopping the count once it exceeds `limit`.
std::size_t count_trajectories(const TabularMdp& mdp, const PrimitivePolicy& policy,
                               std::size_t limit = kEnumerationLimit);
std::size_t count_trajectories(const TabularMdp& mdp, const OptionsPolicy& policy,
                               std::size_t limit = kEnumerationLimit);

// Visits every outcome path with its probability under `policy`; probabilities
// sum to 1. Throws NumericalError when more than `limit` paths exist.
void enumerate_trajectories(const TabularMdp& mdp, const PrimitivePolicy& policy,
                            const TrajectoryVisitor& visit,
                            std::size_t limit = kEnumerationLimit);
void enumerate_trajectories(const TabularMdp& mdp, const OptionsPolicy& policy,
                            const OptionsTrajectoryVisitor& visit,
                            std::size_t limit = kEnumerationLimit);

}  // namespace ope
