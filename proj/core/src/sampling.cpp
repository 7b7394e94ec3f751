#include "ope/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ope {

Trajectory sample_trajectory(const TabularMdp& mdp, const PrimitivePolicy& policy,
                             RandomStream& rng) {
  Trajectory out;
  const auto cap = static_cast<std::size_t>(mdp.horizon());
  out.observations.reserve(cap);
  out.actions.reserve(cap);
  out.rewards.reserve(cap);
  out.behavior_probs.reserve(cap);

  StateId s = mdp.sample_initial(rng);
  for (int t = 0; t < mdp.horizon() && !mdp.is_terminal(s); ++t) {
    const ObservationId o = mdp.sample_observation(s, rng);
    const ActionId a = policy.sample(o, rng);
    const Transition& next = mdp.sample_transition(s, a, rng);
    out.observations.push_back(o);
    out.actions.push_back(a);
    out.rewards.push_back(next.reward);
    out.behavior_probs.push_back(policy.probability(o, a));
    s = next.next;
  }
  return out;
}

HighLevelTrajectory sample_options_trajectory(const TabularMdp& mdp, const OptionsPolicy& policy,
                                              RandomStream& rng) {
  HighLevelTrajectory out;
  StateId s = mdp.sample_initial(rng);
  const Option* active = nullptr;
  int taken = 0;
  int t = 0;
  for (; t < mdp.horizon() && !mdp.is_terminal(s); ++t) {
    const ObservationId o = mdp.sample_observation(s, rng);
    bool stop = active == nullptr;
    if (!stop) {
      const double beta = active->termination(taken, o);
      stop = beta >= 1.0 || (beta > 0.0 && rng.uniform() < beta);
    }
    if (stop) {
      const auto probabilities = policy.distribution(o);
      const auto k = rng.categorical(probabilities);
      active = &policy.option(k);
      taken = 0;
      Segment segment;
      segment.option = active->id;
      segment.option_probability = probabilities[k];
      segment.start_observation = o;
      out.segments.push_back(std::move(segment));
    }
    const ActionId a = active->sub_policy.sample(o, rng);
    const Transition& next = mdp.sample_transition(s, a, rng);
    auto& segment = out.segments.back();
    segment.steps.observations.push_back(o);
    segment.steps.actions.push_back(a);
    segment.steps.rewards.push_back(next.reward);
    segment.steps.behavior_probs.push_back(active->sub_policy.probability(o, a));
    segment.accumulated_reward += next.reward;
    ++taken;
    s = next.next;
  }
  if (!out.segments.empty() && t == mdp.horizon() && !mdp.is_terminal(s)) {
    out.segments.back().truncated = true;
  }
  return out;
}

void parallel_for(std::size_t count, int parallelism,
                  const std::function<void(std::size_t)>& body) {
  const auto workers =
      static_cast<std::size_t>(std::clamp<long long>(parallelism, 1, static_cast<long long>(
                                                                        std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  if (failure) std::rethrow_exception(failure);
}

Dataset generate_dataset(const TabularMdp& mdp, const PrimitivePolicy& policy, std::size_t count,
                         std::uint64_t seed, int parallelism) {
  Dataset data;
  data.metadata.seed = seed;
  data.trajectories.resize(count);
  parallel_for(count, parallelism, [&](std::size_t i) {
    RandomStream rng(derive_seed(seed, i));
    data.trajectories[i] = sample_trajectory(mdp, policy, rng);
  });
  return data;
}

OptionsDataset generate_options_dataset(const TabularMdp& mdp, const OptionsPolicy& policy,
                                        std::size_t count, std::uint64_t seed, int parallelism) {
  OptionsDataset data;
  data.metadata.seed = seed;
  data.trajectories.resize(count);
  parallel_for(count, parallelism, [&](std::size_t i) {
    RandomStream rng(derive_seed(seed, i));
    data.trajectories[i] = sample_options_trajectory(mdp, policy, rng);
  });
  return data;
}

}  // namespace ope
