#include "ope/registry.hpp"

#include <initializer_list>
#include <string_view>

#include "ope/types.hpp"

namespace ope {
namespace {

using nlohmann::json;

void require_object(const json& spec, std::string_view what) {
  if (!spec.is_object()) throw ConfigError(std::string(what) + " spec must be a JSON object");
}

void allow_keys(const json& spec, std::string_view what, std::initializer_list<std::string_view> keys) {
  for (const auto& [key, value] : spec.items()) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_or(const json& spec, const char* key, T fallback) {
  if (!spec.contains(key)) return fallback;
  try {
    return spec.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "': " + spec.at(key).dump());
  }
}

template <typename T>
T get_required(const json& spec, const char* key, std::string_view what) {
  if (!spec.contains(key)) {
    throw ConfigError(std::string(what) + ": missing '" + key + "'");
  }
  return get_or<T>(spec, key, T{});
}

Environment chain_environment(const json& spec) {
  allow_keys(spec, "chain", {"env", "H"});
  ChainSpec chain;
  chain.horizon = get_or(spec, "H", chain.horizon);
  if (chain.horizon < 1) throw ConfigError("chain: H must be >= 1");
  auto mdp = chain_mdp(chain);
  auto uniform = PrimitivePolicy::uniform(mdp.observation_count(), mdp.action_count());
  auto optimal = chain_optimal_policy(chain);
  return Environment{"chain", {{"env", "chain"}, {"H", chain.horizon}}, std::move(mdp), optimal, {},
                     std::move(uniform), optimal};
}

Environment taxi_environment(const json& spec) {
  allow_keys(spec, "noisy_taxi",
             {"env", "horizon_cap", "noisy", "layout", "position_exact", "position_off_by_one",
              "passenger_flicker"});
  TaxiSpec taxi;
  taxi.horizon_cap = get_or(spec, "horizon_cap", taxi.horizon_cap);
  taxi.noisy = get_or(spec, "noisy", taxi.noisy);
  taxi.position_exact = get_or(spec, "position_exact", taxi.position_exact);
  taxi.position_off_by_one = get_or(spec, "position_off_by_one", taxi.position_off_by_one);
  taxi.passenger_flicker = get_or(spec, "passenger_flicker", taxi.passenger_flicker);
  const auto layout = get_or<std::string>(spec, "layout", "");
  if (!layout.empty()) {
    try {
      taxi.layout = load_taxi_layout(layout);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("noisy_taxi layout: ") + e.what());
    }
  }
  if (taxi.horizon_cap < 1) throw ConfigError("noisy_taxi: horizon_cap must be >= 1");

  json normalized = {{"env", "noisy_taxi"},
                     {"horizon_cap", taxi.horizon_cap},
                     {"noisy", taxi.noisy},
                     {"position_exact", taxi.position_exact},
                     {"position_off_by_one", taxi.position_off_by_one},
                     {"passenger_flicker", taxi.passenger_flicker}};
  if (!layout.empty()) normalized["layout"] = layout;
  try {
    return Environment{"noisy_taxi", std::move(normalized), noisy_taxi(taxi),
                       taxi_optimal_policy(taxi),
                       [taxi](const Trajectory& t) { return taxi_pickup_cut(t, taxi); },
                       std::nullopt, std::nullopt};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("noisy_taxi: ") + e.what());
  }
}

Environment sub_episode_environment(const json& spec) {
  allow_keys(spec, "sub_episode", {"env", "p_e", "sub_episodes", "drift", "reward_after_increment"});
  SubEpisodeSpec sub;
  sub.p_e = get_or(spec, "p_e", sub.p_e);
  sub.sub_episodes = get_or(spec, "sub_episodes", sub.sub_episodes);
  sub.drift = get_or(spec, "drift", sub.drift);
  sub.reward_after_increment = get_or(spec, "reward_after_increment", sub.reward_after_increment);
  if (sub.sub_episodes < 1) throw ConfigError("sub_episode: sub_episodes must be >= 1");

  json normalized = {{"env", "sub_episode"},
                     {"p_e", sub.p_e},
                     {"sub_episodes", sub.sub_episodes},
                     {"drift", sub.drift},
                     {"reward_after_increment", sub.reward_after_increment}};
  try {
    auto [behavior, evaluation] = sub_episode_policies(sub.p_e);
    return Environment{"sub_episode", std::move(normalized), sub_episode_mdp(sub), std::nullopt, {},
                       std::move(behavior), std::move(evaluation)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("sub_episode: ") + e.what());
  }
}

const PrimitivePolicy& optimal_of(const Environment& env) {
  if (!env.optimal) throw ConfigError("environment " + env.id + " has no optimal policy");
  return *env.optimal;
}

}  // namespace

Environment make_environment(const json& spec) {
  require_object(spec, "environment");
  const auto id = get_required<std::string>(spec, "env", "environment");
  if (id == "chain") return chain_environment(spec);
  if (id == "noisy_taxi") return taxi_environment(spec);
  if (id == "sub_episode") return sub_episode_environment(spec);
  throw ConfigError("unknown environment '" + id + "'");
}

AnyPolicy make_policy(const Environment& env, const json& spec) {
  require_object(spec, "policy");
  const auto type = get_required<std::string>(spec, "type", "policy");
  const int observations = env.mdp.observation_count();
  const int actions = env.mdp.action_count();
  try {
    if (type == "uniform") {
      allow_keys(spec, "uniform policy", {"type"});
      return PrimitivePolicy::uniform(observations, actions);
    }
    if (type == "optimal") {
      allow_keys(spec, "optimal policy", {"type"});
      return optimal_of(env);
    }
    if (type == "behavior" || type == "evaluation") {
      allow_keys(spec, "standard policy", {"type"});
      const auto& p = type == "behavior" ? env.behavior : env.evaluation;
      if (!p) throw ConfigError("environment " + env.id + " has no standard " + type + " policy");
      return *p;
    }
    if (type == "epsilon_greedy") {
      allow_keys(spec, "epsilon_greedy policy", {"type", "epsilon"});
      return PrimitivePolicy::epsilon_greedy(optimal_of(env),
                                             get_required<double>(spec, "epsilon", "epsilon_greedy"));
    }
    if (type == "preferring") {
      allow_keys(spec, "preferring policy", {"type", "action", "p"});
      const auto action = get_required<ActionId>(spec, "action", "preferring");
      if (action < 0 || action >= actions) throw ConfigError("preferring: action out of range");
      return PrimitivePolicy::preferring(observations, actions, action,
                                         get_required<double>(spec, "p", "preferring"));
    }
    if (type == "options") {
      allow_keys(spec, "options policy", {"type", "epsilon", "n_step"});
      return epsilon_greedy_options_policy(optimal_of(env),
                                           get_required<int>(spec, "n_step", "options"),
                                           get_required<double>(spec, "epsilon", "options"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(type + " policy: " + e.what());
  }
  throw ConfigError("unknown policy type '" + type + "'");
}

std::set<OptionId> changed_options(const OptionsPolicy& behavior, const OptionsPolicy& evaluation) {
  std::set<OptionId> changed;
  for (const auto& option : behavior.options()) {
    const auto match = evaluation.find(option.id);
    if (!match || !(evaluation.option(*match).sub_policy == option.sub_policy)) {
      changed.insert(option.id);
    }
  }
  return changed;
}

}  // namespace ope
