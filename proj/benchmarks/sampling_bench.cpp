#include <benchmark/benchmark.h>

#include "ope/environments.hpp"
#include "ope/sampling.hpp"

namespace {

void BM_SampleSubEpisode(benchmark::State& state) {
  const auto mdp = ope::sub_episode_mdp({});
  const auto [b, e] = ope::sub_episode_policies(0.9);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ope::generate_dataset(mdp, b, 1000, ++seed).size());
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SampleSubEpisode)->Unit(benchmark::kMillisecond);

void BM_SampleTaxi(benchmark::State& state) {
  const ope::TaxiSpec spec;
  const auto mdp = ope::noisy_taxi(spec);
  const auto policy = ope::taxi_optimal_policy(spec);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ope::generate_dataset(mdp, policy, 1000, ++seed).size());
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SampleTaxi)->Unit(benchmark::kMillisecond);

}  // namespace
