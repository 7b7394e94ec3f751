#include "ope/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ope/sampling.hpp"
#include "ope/statistics.hpp"
#include "ope/types.hpp"

namespace ope {
namespace {

// States reachable within the horizon under any action sequence.
std::vector<bool> reachable_states(const TabularMdp& mdp) {
  std::vector<bool> seen(mdp.state_count(), false);
  std::vector<StateId> frontier;
  const auto init = mdp.initial_distribution();
  for (StateId s = 0; s < mdp.state_count(); ++s) {
    if (init[s] > 0.0) {
      seen[s] = true;
      frontier.push_back(s);
    }
  }
  for (int t = 0; t < mdp.horizon() && !frontier.empty(); ++t) {
    std::vector<StateId> next_frontier;
    for (StateId s : frontier) {
      if (mdp.is_terminal(s)) continue;
      for (ActionId a = 0; a < mdp.action_count(); ++a) {
        for (const auto& next : mdp.outcomes(s, a)) {
          if (!seen[next.next]) {
            seen[next.next] = true;
            next_frontier.push_back(next.next);
          }
        }
      }
    }
    frontier = std::move(next_frontier);
  }
  return seen;
}

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

void check_size(std::size_t cells, std::size_t limit) {
  if (cells > limit) {
    throw NumericalError("exact value needs " + std::to_string(cells) +
                         " table entries (limit " + std::to_string(limit) +
                         "); use monte_carlo_value instead");
  }
}

double initial_value(const TabularMdp& mdp, std::span<const double> value) {
  const auto init = mdp.initial_distribution();
  double total = 0.0;
  for (StateId s = 0; s < mdp.state_count(); ++s) {
    if (init[s] > 0.0) total += init[s] * value[s];
  }
  return total;
}

ValueResult from_returns(std::span<const double> returns) {
  ValueResult out;
  out.method = ValueMethod::monte_carlo;
  out.value = mean(returns);
  out.standard_error =
      returns.size() > 1 ? std::sqrt(sample_var(returns) / static_cast<double>(returns.size()))
                         : 0.0;
  return out;
}

// Per-trajectory contribution of a linear or n = 1 estimator.
double single_trajectory_estimate(Estimator estimator, const WeightedTrajectory& weighted,
                                  std::size_t cut) {
  const std::span<const WeightedTrajectory> one(&weighted, 1);
  switch (estimator) {
    case Estimator::is: return is_estimate(one).estimate;
    case Estimator::pdis:
    case Estimator::options_pdis: return pdis_estimate(one).estimate;
    case Estimator::wis: return wis_estimate(one).estimate;
    case Estimator::cwpdis: return cwpdis_estimate(one).estimate;
    case Estimator::partitioned_pdis: {
      const std::size_t cuts[] = {cut};
      return partitioned_pdis_estimate(one, cuts).estimate;
    }
    case Estimator::incris: break;
  }
  throw std::invalid_argument("INCRIS needs n >= 2; it has no single-trajectory expectation");
}

}  // namespace

std::string_view to_string(ValueMethod method) {
  switch (method) {
    case ValueMethod::exact_dp: return "exact-dp";
    case ValueMethod::enumeration: return "enumeration";
    case ValueMethod::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

ValueResult exact_value(const TabularMdp& mdp, const PrimitivePolicy& policy,
                        std::size_t limit) {
  const auto states = static_cast<std::size_t>(mdp.state_count());
  check_size(states * static_cast<std::size_t>(mdp.horizon()), limit);
  const auto reachable = reachable_states(mdp);

  std::vector<double> value(states, 0.0), next(states, 0.0);
  for (int remaining = 1; remaining <= mdp.horizon(); ++remaining) {
    for (StateId s = 0; s < mdp.state_count(); ++s) {
      double v = 0.0;
      if (reachable[s] && !mdp.is_terminal(s)) {
        for (const auto& e : mdp.emissions(s)) {
          if (!policy.defined_at(e.observation)) {
            v = kUnset;
            break;
          }
          const auto actions = policy.distribution(e.observation);
          double q = 0.0;
          for (ActionId a = 0; a < mdp.action_count(); ++a) {
            if (actions[a] <= 0.0) continue;
            double outcome = 0.0;
            for (const auto& t : mdp.outcomes(s, a)) {
              if (t.probability <= 0.0) continue;
              outcome += t.probability * (t.reward + value[t.next]);
            }
            q += actions[a] * outcome;
          }
          v += e.probability * q;
        }
      }
      next[s] = v;
    }
    std::swap(value, next);
  }
  const double result = initial_value(mdp, value);
  if (!std::isfinite(result)) {
    throw NumericalError("policy reaches an observation where it is undefined");
  }
  return {result, ValueMethod::exact_dp, 0.0};
}

ValueResult exact_value(const TabularMdp& mdp, const OptionsPolicy& policy, std::size_t limit) {
  const auto options = policy.options();
  const auto option_count = options.size();
  const int horizon = mdp.horizon();
  int longest = 0;
  for (const auto& o : options) {
    longest = std::max(longest, o.duration_limit > 0 ? std::min(o.duration_limit, horizon)
                                                     : horizon);
  }
  const auto states = static_cast<std::size_t>(mdp.state_count());
  const auto steps = static_cast<std::size_t>(longest);
  check_size(states * static_cast<std::size_t>(horizon) * option_count * steps, limit);
  const auto reachable = reachable_states(mdp);

  // running[s][k][j-1]: value at s with option k active after j steps, before
  // the observation at s is drawn. choose[s]: value when a new option starts.
  const auto at = [&](StateId s, std::size_t k, std::size_t j) {
    return (static_cast<std::size_t>(s) * option_count + k) * steps + (j - 1);
  };
  std::vector<double> running(states * option_count * steps, 0.0), next_running(running.size());
  std::vector<double> choose(states, 0.0), next_choose(states);
  std::vector<double> act(option_count * (steps + 1));

  for (int remaining = 1; remaining <= horizon; ++remaining) {
    std::fill(next_running.begin(), next_running.end(), 0.0);
    std::fill(next_choose.begin(), next_choose.end(), 0.0);
    for (StateId s = 0; s < mdp.state_count(); ++s) {
      if (!reachable[s] || mdp.is_terminal(s)) continue;
      for (const auto& e : mdp.emissions(s)) {
        const ObservationId o = e.observation;
        // act[k * (steps + 1) + j]: take one step of option k having taken j.
        // NaN marks a sub-policy that is undefined at `o`; it only reaches the
        // result if the evaluated policy can actually get there.
        for (std::size_t k = 0; k < option_count; ++k) {
          const auto& sub = options[k].sub_policy;
          if (!sub.defined_at(o)) {
            std::fill_n(act.begin() + static_cast<std::ptrdiff_t>(k * (steps + 1)), steps, kUnset);
            continue;
          }
          const auto actions = sub.distribution(o);
          for (std::size_t j = 0; j < steps; ++j) {
            double q = 0.0;
            for (ActionId a = 0; a < mdp.action_count(); ++a) {
              if (actions[a] <= 0.0) continue;
              double outcome = 0.0;
              for (const auto& t : mdp.outcomes(s, a)) {
                if (t.probability <= 0.0) continue;
                outcome += t.probability * (t.reward + running[at(t.next, k, j + 1)]);
              }
              q += actions[a] * outcome;
            }
            act[k * (steps + 1) + j] = q;
          }
        }
        double start = kUnset;
        try {
          const auto mu = policy.distribution(o);
          start = 0.0;
          for (std::size_t k = 0; k < option_count; ++k) {
            if (mu[k] > 0.0) start += mu[k] * act[k * (steps + 1)];
          }
        } catch (const std::runtime_error&) {
          // no option may start here; fine unless an option terminates here
        }
        next_choose[s] += e.probability * start;
        for (std::size_t k = 0; k < option_count; ++k) {
          for (std::size_t j = 1; j <= steps; ++j) {
            const double beta = options[k].termination(static_cast<int>(j), o);
            double v = beta > 0.0 ? beta * start : 0.0;
            if (beta < 1.0) {
              if (j == steps) {
                if (static_cast<int>(j) < horizon) {
                  throw std::invalid_argument("option " + options[k].id +
                                              " runs past its duration limit");
                }
              } else {
                v += (1.0 - beta) * act[k * (steps + 1) + j];
              }
            }
            next_running[at(s, k, j)] += e.probability * v;
          }
        }
      }
    }
    std::swap(running, next_running);
    std::swap(choose, next_choose);
  }
  const double value = initial_value(mdp, choose);
  if (!std::isfinite(value)) {
    throw NumericalError("options policy reaches an observation where it is undefined");
  }
  return {value, ValueMethod::exact_dp, 0.0};
}

ValueResult monte_carlo_value(const TabularMdp& mdp, const PrimitivePolicy& policy,
                              std::size_t episodes, std::uint64_t seed, int parallelism) {
  if (episodes == 0) throw std::invalid_argument("monte_carlo_value needs at least one episode");
  std::vector<double> returns(episodes);
  parallel_for(episodes, parallelism, [&](std::size_t i) {
    RandomStream rng(derive_seed(seed, i));
    returns[i] = sample_trajectory(mdp, policy, rng).total_return();
  });
  return from_returns(returns);
}

ValueResult monte_carlo_value(const TabularMdp& mdp, const OptionsPolicy& policy,
                              std::size_t episodes, std::uint64_t seed, int parallelism) {
  if (episodes == 0) throw std::invalid_argument("monte_carlo_value needs at least one episode");
  std::vector<double> returns(episodes);
  parallel_for(episodes, parallelism, [&](std::size_t i) {
    RandomStream rng(derive_seed(seed, i));
    returns[i] = sample_options_trajectory(mdp, policy, rng).total_return();
  });
  return from_returns(returns);
}

double chain_pdis_variance(int horizon, std::int64_t n) {
  if (horizon < 1 || n < 1) throw std::invalid_argument("chain_pdis_variance: H, n >= 1");
  return (std::ldexp(1.0, horizon) - 1.0) / static_cast<double>(n);
}

double chain_wis_bias(int horizon, std::int64_t n) {
  if (horizon < 1 || n < 1) throw std::invalid_argument("chain_wis_bias: H, n >= 1");
  return std::pow(1.0 - std::ldexp(1.0, -horizon), static_cast<double>(n));
}

double chain_wis_expectation(int horizon, std::int64_t n) {
  return 1.0 - chain_wis_bias(horizon, n);
}

double exact_estimator_expectation(const TabularMdp& mdp, const PrimitivePolicy& behavior,
                                   const PrimitivePolicy& evaluation, Estimator estimator,
                                   const CutFn& cut) {
  if (estimator == Estimator::options_pdis) {
    throw std::invalid_argument("options_pdis needs options-based policies");
  }
  if (estimator == Estimator::partitioned_pdis && !cut) {
    throw std::invalid_argument("partitioned_pdis needs a cut function");
  }
  if (estimator == Estimator::incris) single_trajectory_estimate(estimator, {}, 0);
  double expectation = 0.0;
  enumerate_trajectories(mdp, behavior, [&](const Trajectory& t, double p) {
    const std::size_t c = estimator == Estimator::partitioned_pdis ? cut(t) : 0;
    expectation += p * single_trajectory_estimate(estimator, weigh(t, evaluation), c);
  });
  return expectation;
}

double exact_estimator_expectation(const TabularMdp& mdp, const OptionsPolicy& behavior,
                                   const OptionsPolicy& evaluation, Estimator estimator,
                                   const std::set<OptionId>& changed) {
  if (estimator == Estimator::partitioned_pdis) {
    throw std::invalid_argument("partitioned_pdis expectation is defined on primitive policies");
  }
  if (estimator == Estimator::incris) single_trajectory_estimate(estimator, {}, 0);
  double expectation = 0.0;
  enumerate_trajectories(mdp, behavior, [&](const HighLevelTrajectory& t, double p) {
    double estimate = 0.0;
    if (estimator == Estimator::options_pdis) {
      OptionsDataset one;
      one.trajectories.push_back(t);
      estimate = options_pdis_estimate(one, evaluation, changed).estimate;
    } else {
      estimate = single_trajectory_estimate(estimator, weigh(t, evaluation, changed), 0);
    }
    expectation += p * estimate;
  });
  return expectation;
}

std::vector<std::vector<double>> exact_split_biases(const TabularMdp& mdp,
                                                    const PrimitivePolicy& behavior,
                                                    const PrimitivePolicy& evaluation) {
  const auto horizon = static_cast<std::size_t>(mdp.horizon());
  std::vector<std::vector<double>> bias(horizon);
  for (std::size_t t = 0; t < horizon; ++t) bias[t].assign(t + 2, 0.0);
  enumerate_trajectories(mdp, behavior, [&](const Trajectory& trajectory, double p) {
    const auto weighted = weigh(trajectory, evaluation);
    const auto full = direct_cumulative_weights(weighted.ratios);
    for (std::size_t t = 0; t < weighted.size(); ++t) {
      const double r = weighted.rewards[t];
      if (r == 0.0) continue;
      double recent = 1.0;
      for (std::size_t k = 0; k <= t + 1; ++k) {
        bias[t][k] += p * (recent - full[t]) * r;
        if (k <= t) recent *= weighted.ratios[t - k];
      }
    }
  });
  return bias;
}

}  // namespace ope
