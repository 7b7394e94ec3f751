#pragma once

#include <cstdint>
#include <set>
#include <string_view>
#include <vector>

#include "ope/enumerate.hpp"
#include "ope/estimators.hpp"
#include "ope/mdp.hpp"
#include "ope/policy.hpp"

namespace ope {

enum class ValueMethod { exact_dp, enumeration, monte_carlo };
std::string_view to_string(ValueMethod method);

struct ValueResult {
  double value = 0.0;
  ValueMethod method = ValueMethod::exact_dp;
  double standard_error = 0.0;  // 0 for exact methods
};

// Largest (state, step, option context) table the exact oracles will build.
inline constexpr std::size_t kExactValueLimit = 1'000'000;

// Backward induction over (state, steps remaining). Observations are drawn
// fresh from the state at every step, so the observation-conditioned policy
// induces the state-conditioned action law sum_o O(o|s) pi(a|o). Throws
// NumericalError when states x horizon exceeds `limit`.
ValueResult exact_value(const TabularMdp& mdp, const PrimitivePolicy& policy,
                        std::size_t limit = kExactValueLimit);
// Backward induction over (state, steps remaining, active option, steps taken
// by it). Option lengths are bounded by their duration_limit, or the horizon.
ValueResult exact_value(const TabularMdp& mdp, const OptionsPolicy& policy,
                        std::size_t limit = kExactValueLimit);

// Mean return of `episodes` on-policy episodes; episode i uses the stream
// derive_seed(seed, i). Standard error is the sample standard deviation / sqrt(n).
ValueResult monte_carlo_value(const TabularMdp& mdp, const PrimitivePolicy& policy,
                              std::size_t episodes, std::uint64_t seed, int parallelism = 1);
ValueResult monte_carlo_value(const TabularMdp& mdp, const OptionsPolicy& policy,
                              std::size_t episodes, std::uint64_t seed, int parallelism = 1);

// Two-chain MDP with a uniform behavior policy and the always-a1 evaluation policy.
double chain_pdis_variance(int horizon, std::int64_t n);   // (2^H - 1) / n
double chain_wis_bias(int horizon, std::int64_t n);        // (1 - 2^-H)^n
double chain_wis_expectation(int horizon, std::int64_t n); // 1 - (1 - 2^-H)^n

// Exact expectation of an estimator applied to a single trajectory drawn from
// the behavior policy, by enumerating every trajectory. For the linear
// estimators (is, pdis, partitioned_pdis, options_pdis) this is the expectation
// at every n. INCRIS is refused (it needs n >= 2).
double exact_estimator_expectation(const TabularMdp& mdp, const PrimitivePolicy& behavior,
                                   const PrimitivePolicy& evaluation, Estimator estimator,
                                   const CutFn& cut = {});
double exact_estimator_expectation(const TabularMdp& mdp, const OptionsPolicy& behavior,
                                   const OptionsPolicy& evaluation, Estimator estimator,
                                   const std::set<OptionId>& changed = {});

// bias[t][k] = E_b[B_k r_t] - E_e[r_t]: the exact bias of keeping only the k
// most recent ratios for the reward at step t (k = 0..t+1), by enumeration.
std::vector<std::vector<double>> exact_split_biases(const TabularMdp& mdp,
                                                    const PrimitivePolicy& behavior,
                                                    const PrimitivePolicy& evaluation);

}  // namespace ope
