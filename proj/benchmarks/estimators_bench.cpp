#include <benchmark/benchmark.h>

#include "ope/environments.hpp"
#include "ope/estimators.hpp"
#include "ope/sampling.hpp"
#include "ope/weights.hpp"

namespace {

// Sub-episode MDP with sub_episodes = H / 2, so every trajectory has H steps.
ope::WeightedData sub_episode_data(int horizon, std::size_t n) {
  ope::SubEpisodeSpec spec;
  spec.sub_episodes = horizon / 2;
  const auto mdp = ope::sub_episode_mdp(spec);
  const auto [b, e] = ope::sub_episode_policies(spec.p_e);
  return ope::weigh(ope::generate_dataset(mdp, b, n, 7), e);
}

void BM_Incris(benchmark::State& state) {
  const auto data = sub_episode_data(static_cast<int>(state.range(0)),
                                     static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(ope::incris_estimate(data).estimate);
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Incris)->Args({100, 10000})->Args({20, 10000})->Unit(benchmark::kMillisecond);

void BM_Pdis(benchmark::State& state) {
  const auto data = sub_episode_data(100, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ope::pdis_estimate(data).estimate);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Pdis)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_Cwpdis(benchmark::State& state) {
  const auto data = sub_episode_data(100, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ope::cwpdis_estimate(data).estimate);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Cwpdis)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace
