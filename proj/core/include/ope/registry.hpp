#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "ope/environments.hpp"
#include "ope/estimators.hpp"
#include "ope/mdp.hpp"
#include "ope/policy.hpp"

namespace ope {

// An environment built from a JSON spec such as
//   {"env": "chain", "H": 10}
//   {"env": "noisy_taxi", "horizon_cap": 200, "layout": "data/taxi_layout.json"}
//   {"env": "sub_episode", "p_e": 0.9, "sub_episodes": 50, "drift": 0.01}
struct Environment {
  std::string id;
  nlohmann::json spec;  // as given, with defaults filled in
  TabularMdp mdp;
  std::optional<PrimitivePolicy> optimal;
  CutFn cut;  // trajectory partition for partitioned_pdis; empty if none
  // The environment's standard behavior/evaluation pair, where it has one.
  std::optional<PrimitivePolicy> behavior;
  std::optional<PrimitivePolicy> evaluation;
};

// Throws ConfigError on unknown ids, unknown keys or bad values.
Environment make_environment(const nlohmann::json& spec);

using AnyPolicy = std::variant<PrimitivePolicy, OptionsPolicy>;

// Policy specs:
//   {"type": "uniform"}
//   {"type": "optimal"}
//   {"type": "epsilon_greedy", "epsilon": 0.3}          around the optimal policy
//   {"type": "preferring", "action": 0, "p": 0.9}
//   {"type": "options", "epsilon": 0.3, "n_step": 2}    fixed-length options
//   {"type": "behavior"} / {"type": "evaluation"}       the environment's standard pair
AnyPolicy make_policy(const Environment& env, const nlohmann::json& spec);

// Options of `behavior` whose sub-policy differs in `evaluation` (or that
// `evaluation` lacks). Termination functions are assumed shared.
std::set<OptionId> changed_options(const OptionsPolicy& behavior, const OptionsPolicy& evaluation);

}  // namespace ope
