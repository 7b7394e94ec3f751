#include "ope/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ope {
namespace {

constexpr double kSumTolerance = 1e-12;

void check_row(std::span<const double> row, const std::string& where) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || p > 1.0 + kSumTolerance) {
      throw std::invalid_argument(where + " has an invalid probability");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument(where + " sums to " + std::to_string(sum) + ", not 1");
  }
}

}  // namespace

PrimitivePolicy::PrimitivePolicy(std::vector<std::vector<double>> table)
    : table_(std::move(table)) {
  cdf_.resize(table_.size());
  for (std::size_t o = 0; o < table_.size(); ++o) {
    const auto& row = table_[o];
    if (row.empty()) continue;
    if (action_count_ == 0) action_count_ = static_cast<int>(row.size());
    if (std::ssize(row) != action_count_) {
      throw std::invalid_argument("policy rows have different widths");
    }
    check_row(row, "policy row for observation " + std::to_string(o));
    auto& cdf = cdf_[o];
    cdf.resize(row.size());
    double running = 0.0;
    for (std::size_t a = 0; a < row.size(); ++a) cdf[a] = (running += row[a]);
  }
}

PrimitivePolicy PrimitivePolicy::uniform(int observation_count, int action_count) {
  return PrimitivePolicy(std::vector<std::vector<double>>(
      observation_count, std::vector<double>(action_count, 1.0 / action_count)));
}

PrimitivePolicy PrimitivePolicy::deterministic(std::span<const ActionId> actions,
                                               int action_count) {
  std::vector<std::vector<double>> table(actions.size(), std::vector<double>(action_count, 0.0));
  for (std::size_t o = 0; o < actions.size(); ++o) table[o].at(actions[o]) = 1.0;
  return PrimitivePolicy(std::move(table));
}

PrimitivePolicy PrimitivePolicy::preferring(int observation_count, int action_count,
                                            ActionId preferred, double p) {
  if (action_count < 2 && p != 1.0) {
    throw std::invalid_argument("preferring: a single action must have probability 1");
  }
  std::vector<double> row(action_count, action_count > 1 ? (1.0 - p) / (action_count - 1) : 0.0);
  row.at(preferred) = p;
  return PrimitivePolicy(std::vector<std::vector<double>>(observation_count, row));
}

PrimitivePolicy PrimitivePolicy::epsilon_greedy(const PrimitivePolicy& base, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon_greedy: epsilon must lie in [0, 1]");
  }
  const int actions = base.action_count();
  std::vector<std::vector<double>> table(base.observation_count());
  for (ObservationId o = 0; o < base.observation_count(); ++o) {
    if (!base.defined_at(o)) continue;
    table[o].assign(actions, epsilon / actions);
    table[o][base.greedy_action(o)] += 1.0 - epsilon;
  }
  return PrimitivePolicy(std::move(table));
}

bool PrimitivePolicy::defined_at(ObservationId o) const {
  return o >= 0 && o < observation_count() && !table_[o].empty();
}

std::span<const double> PrimitivePolicy::distribution(ObservationId o) const {
  if (!defined_at(o)) {
    throw std::out_of_range("policy is undefined at observation " + std::to_string(o));
  }
  return table_[o];
}

ActionId PrimitivePolicy::sample(ObservationId o, RandomStream& rng) const {
  distribution(o);
  return static_cast<ActionId>(rng.from_cdf(cdf_[o]));
}

ActionId PrimitivePolicy::greedy_action(ObservationId o) const {
  const auto row = distribution(o);
  return static_cast<ActionId>(std::max_element(row.begin(), row.end()) - row.begin());
}

Option Option::fixed_length(OptionId id, PrimitivePolicy policy, int steps) {
  if (steps < 1) throw std::invalid_argument("fixed_length: option needs at least one step");
  Option option;
  option.id = std::move(id);
  option.sub_policy = std::move(policy);
  option.termination = [steps](int taken, ObservationId) { return taken >= steps ? 1.0 : 0.0; };
  option.duration_limit = steps;
  return option;
}

OptionsPolicy::OptionsPolicy(std::vector<Option> options,
                             std::vector<std::vector<double>> probabilities)
    : options_(std::move(options)), probabilities_(std::move(probabilities)) {
  if (options_.empty()) throw std::invalid_argument("options policy needs at least one option");
  if (probabilities_.empty()) throw std::invalid_argument("options policy has no probabilities");
  for (std::size_t i = 0; i < options_.size(); ++i) {
    if (!options_[i].termination) {
      throw std::invalid_argument("option " + options_[i].id + " has no termination condition");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (options_[i].id == options_[j].id) {
        throw std::invalid_argument("duplicate option id " + options_[i].id);
      }
    }
  }
  for (std::size_t o = 0; o < probabilities_.size(); ++o) {
    const auto& row = probabilities_[o];
    if (row.empty()) continue;
    if (row.size() != options_.size()) {
      throw std::invalid_argument("option probability row has the wrong width");
    }
    check_row(row, "option probabilities at observation " + std::to_string(o));
    if (probabilities_.size() == 1) continue;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] > 0.0 && !options_[k].can_start(static_cast<ObservationId>(o))) {
        throw std::invalid_argument("option " + options_[k].id +
                                    " has positive probability outside its initiation set");
      }
    }
  }
}

std::optional<std::size_t> OptionsPolicy::find(const OptionId& id) const {
  for (std::size_t k = 0; k < options_.size(); ++k) {
    if (options_[k].id == id) return k;
  }
  return std::nullopt;
}

std::vector<double> OptionsPolicy::distribution(ObservationId o) const {
  const bool shared = probabilities_.size() == 1;
  if (!shared && (o < 0 || o >= std::ssize(probabilities_) || probabilities_[o].empty())) {
    throw std::out_of_range("options policy is undefined at observation " + std::to_string(o));
  }
  std::vector<double> row = shared ? probabilities_.front() : probabilities_[o];
  double total = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (!options_[k].can_start(o)) row[k] = 0.0;
    total += row[k];
  }
  if (!(total > 0.0)) {
    throw std::runtime_error("no admissible option at observation " + std::to_string(o));
  }
  if (shared && total != 1.0) {
    for (double& p : row) p /= total;
  }
  return row;
}

double OptionsPolicy::probability(ObservationId o, const OptionId& id) const {
  const auto k = find(id);
  return k ? distribution(o)[*k] : 0.0;
}

std::size_t OptionsPolicy::sample(ObservationId o, RandomStream& rng) const {
  return rng.categorical(distribution(o));
}

}  // namespace ope
