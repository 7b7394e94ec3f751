#pragma once

#include <cstdint>
#include <functional>

#include "ope/mdp.hpp"
#include "ope/policy.hpp"
#include "ope/trajectory.hpp"

namespace ope {

// Runs one episode of `policy` on `mdp`. A fresh observation is drawn at every
// step, conditioned on the current state. Throws std::out_of_range naming the
// observation when the policy is undefined there.
Trajectory sample_trajectory(const TabularMdp& mdp, const PrimitivePolicy& policy,
                             RandomStream& rng);

// Runs one episode of an options-based policy. A new option is chosen only
// when the previous one terminates; the option running when the horizon cap is
// hit is force-terminated and its segment marked truncated.
HighLevelTrajectory sample_options_trajectory(const TabularMdp& mdp, const OptionsPolicy& policy,
                                              RandomStream& rng);

// Calls body(i) for i in [0, count) on up to `parallelism` threads.
void parallel_for(std::size_t count, int parallelism, const std::function<void(std::size_t)>& body);

// Trajectory i is sampled from RandomStream(derive_seed(seed, i)), so the result
// does not depend on `parallelism`.
Dataset generate_dataset(const TabularMdp& mdp, const PrimitivePolicy& policy, std::size_t count,
                         std::uint64_t seed, int parallelism = 1);
OptionsDataset generate_options_dataset(const TabularMdp& mdp, const OptionsPolicy& policy,
                                        std::size_t count, std::uint64_t seed,
                                        int parallelism = 1);

}  // namespace ope
