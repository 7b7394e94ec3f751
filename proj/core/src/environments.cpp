#include "ope/environments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ope {

// --- chain -----------------------------------------------------------------

TabularMdp chain_mdp(const ChainSpec& spec) {
  const int h = spec.horizon;
  if (h < 1) throw std::invalid_argument("chain_mdp: horizon must be at least 1");
  const int states = 2 * h + 1;
  const auto top = [](int i) { return i - 1; };       // x_i, i in 1..H+1
  const auto bottom = [h](int i) { return h + i; };   // y_i, i in 1..H

  MdpDefinition d;
  d.name = "chain";
  d.state_count = states;
  d.action_count = 2;
  d.horizon = h;
  d.initial_distribution.assign(states, 0.0);
  d.initial_distribution[top(1)] = 1.0;
  d.transitions.resize(static_cast<std::size_t>(states) * 2);
  d.reward_bounds = {0.0, 1.0};
  auto set = [&](int s, ActionId a, int next, double reward) {
    d.transitions[static_cast<std::size_t>(s) * 2 + a] = {{next, 1.0, reward}};
  };
  for (int i = 1; i <= h; ++i) {
    set(top(i), kChainAdvance, top(i + 1), i == h ? 1.0 : 0.0);
    set(top(i), kChainDrop, bottom(i), 0.0);
    const int below = i < h ? bottom(i + 1) : bottom(i);
    set(bottom(i), kChainAdvance, below, 0.0);
    set(bottom(i), kChainDrop, below, 0.0);
  }
  set(top(h + 1), kChainAdvance, top(h + 1), 0.0);
  set(top(h + 1), kChainDrop, top(h + 1), 0.0);
  return TabularMdp(std::move(d));
}

PrimitivePolicy chain_optimal_policy(const ChainSpec& spec) {
  const std::vector<ActionId> actions(2 * spec.horizon + 1, kChainAdvance);
  return PrimitivePolicy::deterministic(actions, 2);
}

// --- taxi ------------------------------------------------------------------

TaxiLayout TaxiLayout::standard() {
  TaxiLayout layout;
  layout.landmarks = {GridCell{0, 0}, GridCell{0, 4}, GridCell{4, 0}, GridCell{4, 3}};
  layout.east_walls = {{0, 1}, {1, 1}, {3, 0}, {4, 0}, {3, 2}, {4, 2}};
  return layout;
}

bool TaxiLayout::blocks_east(int row, int col) const {
  return std::find(east_walls.begin(), east_walls.end(), GridCell{row, col}) != east_walls.end();
}

TaxiLayout load_taxi_layout(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open taxi layout " + path);
  const auto j = nlohmann::json::parse(in);
  TaxiLayout layout;
  layout.rows = j.at("rows").get<int>();
  layout.cols = j.at("cols").get<int>();
  const char* names[] = {"R", "G", "Y", "B"};
  for (int k = 0; k < 4; ++k) {
    const auto& cell = j.at("landmarks").at(names[k]);
    layout.landmarks[k] = {cell.at(0).get<int>(), cell.at(1).get<int>()};
  }
  for (const auto& cell : j.at("east_walls")) {
    layout.east_walls.push_back({cell.at(0).get<int>(), cell.at(1).get<int>()});
  }
  return layout;
}

int taxi_index(const TaxiLayout& layout, const TaxiState& s) {
  return ((s.row * layout.cols + s.col) * 5 + s.passenger) * 4 + s.destination;
}

TaxiState taxi_decode(const TaxiLayout& layout, int index) {
  TaxiState s;
  s.destination = index % 4;
  index /= 4;
  s.passenger = index % 5;
  index /= 5;
  s.col = index % layout.cols;
  s.row = index / layout.cols;
  return s;
}

int taxi_terminal_index(const TaxiLayout& layout) { return layout.rows * layout.cols * 20; }

namespace {

void validate_taxi(const TaxiSpec& spec) {
  const auto& l = spec.layout;
  if (l.rows < 2 || l.cols < 2) throw std::invalid_argument("taxi grid is too small");
  for (int a = 0; a < 4; ++a) {
    const auto& c = l.landmarks[a];
    if (c.row < 0 || c.row >= l.rows || c.col < 0 || c.col >= l.cols) {
      throw std::invalid_argument("taxi landmark off the grid");
    }
    for (int b = 0; b < a; ++b) {
      if (l.landmarks[b] == c) throw std::invalid_argument("taxi landmarks must be distinct");
    }
  }
  if (spec.position_exact < 0.0 || spec.position_off_by_one < 0.0 ||
      std::abs(spec.position_exact + 2.0 * spec.position_off_by_one - 1.0) > 1e-12) {
    throw std::invalid_argument("taxi position noise must sum to 1");
  }
  if (spec.passenger_flicker < 0.0 || spec.passenger_flicker > 1.0) {
    throw std::invalid_argument("taxi passenger flicker must be a probability");
  }
  if (spec.horizon_cap < 1) throw std::invalid_argument("taxi horizon cap must be positive");
}

// Distribution of an observed coordinate given the true one, neighbours clipped.
std::vector<std::pair<int, double>> noisy_coordinate(int c, int size, const TaxiSpec& spec) {
  std::map<int, double> law;
  law[c] += spec.position_exact;
  law[std::max(c - 1, 0)] += spec.position_off_by_one;
  law[std::min(c + 1, size - 1)] += spec.position_off_by_one;
  return {law.begin(), law.end()};
}

struct TaxiStep {
  int next;  // state index
  double reward;
};

TaxiStep taxi_step(const TaxiSpec& spec, const TaxiState& s, ActionId a) {
  const auto& l = spec.layout;
  TaxiState n = s;
  double reward = spec.step_reward;
  switch (a) {
    case kSouth: n.row = std::min(s.row + 1, l.rows - 1); break;
    case kNorth: n.row = std::max(s.row - 1, 0); break;
    case kEast:
      if (s.col + 1 < l.cols && !l.blocks_east(s.row, s.col)) n.col = s.col + 1;
      break;
    case kWest:
      if (s.col > 0 && !l.blocks_east(s.row, s.col - 1)) n.col = s.col - 1;
      break;
    case kPickup:
      if (s.passenger != kInTaxi && l.landmarks[s.passenger] == GridCell{s.row, s.col}) {
        n.passenger = kInTaxi;
      } else {
        reward = spec.illegal_reward;
      }
      break;
    case kDropoff:
      if (s.passenger == kInTaxi && l.landmarks[s.destination] == GridCell{s.row, s.col}) {
        return {taxi_terminal_index(l), spec.dropoff_reward};
      }
      reward = spec.illegal_reward;
      break;
    default: throw std::invalid_argument("unknown taxi action");
  }
  return {taxi_index(l, n), reward};
}

}  // namespace

TabularMdp noisy_taxi(const TaxiSpec& spec) {
  validate_taxi(spec);
  const auto& l = spec.layout;
  const int terminal = taxi_terminal_index(l);
  const int states = terminal + 1;

  MdpDefinition d;
  d.name = "noisy_taxi";
  d.state_count = states;
  d.action_count = kTaxiActions;
  d.observation_count = states;
  d.horizon = spec.horizon_cap;
  d.reward_bounds = {std::min({spec.step_reward, spec.illegal_reward, spec.dropoff_reward}),
                     std::max({spec.step_reward, spec.illegal_reward, spec.dropoff_reward})};
  d.initial_distribution.assign(states, 0.0);
  d.transitions.resize(static_cast<std::size_t>(states) * kTaxiActions);
  d.emissions.resize(states);
  d.terminal.assign(states, false);
  d.terminal[terminal] = true;

  const double start = 1.0 / (l.rows * l.cols * 16);
  for (int index = 0; index < terminal; ++index) {
    const TaxiState s = taxi_decode(l, index);
    if (s.passenger != kInTaxi) d.initial_distribution[index] = start;
    for (ActionId a = 0; a < kTaxiActions; ++a) {
      const auto step = taxi_step(spec, s, a);
      d.transitions[static_cast<std::size_t>(index) * kTaxiActions + a] = {
          {step.next, 1.0, step.reward}};
    }

    auto& law = d.emissions[index];
    if (!spec.noisy) {
      law = {{index, 1.0}};
      continue;
    }
    std::vector<std::pair<int, double>> passenger;
    if (s.passenger == kInTaxi) {
      passenger = {{kInTaxi, 1.0}};
    } else {
      for (int k = 0; k < 4; ++k) {
        passenger.push_back({k, spec.passenger_flicker / 4.0 +
                                    (k == s.passenger ? 1.0 - spec.passenger_flicker : 0.0)});
      }
    }
    for (const auto& [row, pr] : noisy_coordinate(s.row, l.rows, spec)) {
      for (const auto& [col, pc] : noisy_coordinate(s.col, l.cols, spec)) {
        for (const auto& [pass, pp] : passenger) {
          law.push_back({taxi_index(l, {row, col, pass, s.destination}), pr * pc * pp});
        }
      }
    }
  }
  for (ActionId a = 0; a < kTaxiActions; ++a) {
    d.transitions[static_cast<std::size_t>(terminal) * kTaxiActions + a] = {
        {terminal, 1.0, 0.0}};
  }
  d.emissions[terminal] = {{terminal, 1.0}};
  return TabularMdp(std::move(d));
}

PrimitivePolicy taxi_optimal_policy(const TaxiSpec& spec) {
  validate_taxi(spec);
  const auto& l = spec.layout;
  const int terminal = taxi_terminal_index(l);
  std::vector<double> value(terminal + 1, 0.0), next_value(terminal + 1, 0.0);
  std::vector<ActionId> greedy(terminal + 1, kSouth);
  // Backward induction; the last sweep is the first decision of an episode.
  for (int remaining = 1; remaining <= spec.horizon_cap; ++remaining) {
    for (int index = 0; index < terminal; ++index) {
      const TaxiState s = taxi_decode(l, index);
      double best = -std::numeric_limits<double>::infinity();
      for (ActionId a = 0; a < kTaxiActions; ++a) {
        const auto step = taxi_step(spec, s, a);
        const double q = step.reward + value[step.next];
        if (q > best) {
          best = q;
          greedy[index] = a;
        }
      }
      next_value[index] = best;
    }
    std::swap(value, next_value);
  }
  return PrimitivePolicy::deterministic(greedy, kTaxiActions);
}

std::size_t taxi_pickup_cut(const Trajectory& trajectory, const TaxiSpec& spec) {
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    if (trajectory.actions[t] == kPickup && trajectory.rewards[t] == spec.step_reward) return t + 1;
  }
  return trajectory.size();
}

OptionsPolicy epsilon_greedy_options_policy(const PrimitivePolicy& base, int n_step,
                                            double epsilon) {
  if (n_step < 1) throw std::invalid_argument("options need n_step >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  std::vector<Option> options;
  options.push_back(Option::fixed_length("optimal", base, n_step));
  options.push_back(Option::fixed_length(
      "random", PrimitivePolicy::uniform(base.observation_count(), base.action_count()), n_step));
  return OptionsPolicy(std::move(options), {{1.0 - epsilon, epsilon}});
}

// --- sub-episode -------------------------------------------------------------

TabularMdp sub_episode_mdp(const SubEpisodeSpec& spec) {
  const int k = spec.sub_episodes;
  if (k < 1) throw std::invalid_argument("sub_episode_mdp: need at least one sub-episode");
  if (spec.drift < 0.0) throw std::invalid_argument("sub_episode_mdp: drift must be >= 0");
  const int terminal = 3 * k * (k + 1);
  const int states = terminal + 1;
  const auto index = [k](ObservationId phase, int m, int entries) {
    return (m * (k + 1) + entries) * 3 + phase;
  };

  MdpDefinition d;
  d.name = "sub_episode";
  d.state_count = states;
  d.action_count = 2;
  d.observation_count = 4;
  d.horizon = 2 * k;
  d.reward_bounds = {-2.0, std::max(2.0, -2.0 + spec.drift * k)};
  d.initial_distribution.assign(states, 0.0);
  d.initial_distribution[index(kS1, 0, 0)] = 1.0;
  d.transitions.resize(static_cast<std::size_t>(states) * 2);
  d.emissions.resize(states);
  d.terminal.assign(states, false);
  d.terminal[terminal] = true;

  auto set_both = [&](int s, int next, double reward) {
    d.transitions[static_cast<std::size_t>(s) * 2] = {{next, 1.0, reward}};
    d.transitions[static_cast<std::size_t>(s) * 2 + 1] = {{next, 1.0, reward}};
  };
  for (int m = 0; m < k; ++m) {
    const auto after = [&](int entries) { return m + 1 < k ? index(kS1, m + 1, entries) : terminal; };
    for (int e = 0; e <= k; ++e) {
      const int s1 = index(kS1, m, e);
      d.transitions[static_cast<std::size_t>(s1) * 2] = {
          {e < k ? index(kS2, m, e + 1) : index(kS2, m, e), 1.0, 1.0}};
      d.transitions[static_cast<std::size_t>(s1) * 2 + 1] = {{index(kS3, m, e), 1.0, -1.0}};
      // `e` already counts the current entry to s2.
      const int prior = spec.reward_after_increment ? e : std::max(e - 1, 0);
      set_both(index(kS2, m, e), after(e), -2.0 + spec.drift * prior);
      set_both(index(kS3, m, e), after(e), 2.0);
      d.emissions[s1] = {{kS1, 1.0}};
      d.emissions[index(kS2, m, e)] = {{kS2, 1.0}};
      d.emissions[index(kS3, m, e)] = {{kS3, 1.0}};
    }
  }
  set_both(terminal, terminal, 0.0);
  d.emissions[terminal] = {{3, 1.0}};
  return TabularMdp(std::move(d));
}

std::pair<PrimitivePolicy, PrimitivePolicy> sub_episode_policies(double p_e) {
  if (!(p_e > 0.5 && p_e < 1.0)) {
    throw std::invalid_argument(
        "sub_episode_policies: the evaluation policy must prefer a1, p_e in (0.5, 1)");
  }
  return {PrimitivePolicy::uniform(4, 2), PrimitivePolicy::preferring(4, 2, 0, p_e)};
}

}  // namespace ope
