#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ope/random.hpp"
#include "ope/types.hpp"

namespace ope {

// Distribution over primitive actions, conditioned on the current observation
// only. Observations may be left undefined; touching one is an error.
class PrimitivePolicy {
 public:
  PrimitivePolicy() = default;
  // `table[o]` is the action distribution at observation o; an empty row leaves
  // o undefined. Rows must share one width and sum to 1 within 1e-12.
  explicit PrimitivePolicy(std::vector<std::vector<double>> table);

  static PrimitivePolicy uniform(int observation_count, int action_count);
  static PrimitivePolicy deterministic(std::span<const ActionId> actions, int action_count);
  // Probability `p` on `preferred`, the rest spread evenly over the other actions.
  static PrimitivePolicy preferring(int observation_count, int action_count, ActionId preferred,
                                    double p);
  // (1 - epsilon) on base's greedy action plus epsilon spread uniformly over all actions.
  static PrimitivePolicy epsilon_greedy(const PrimitivePolicy& base, double epsilon);

  int observation_count() const { return static_cast<int>(table_.size()); }
  int action_count() const { return action_count_; }
  bool defined_at(ObservationId o) const;

  // Throws std::out_of_range naming the observation when undefined.
  std::span<const double> distribution(ObservationId o) const;
  double probability(ObservationId o, ActionId a) const { return distribution(o)[a]; }
  ActionId sample(ObservationId o, RandomStream& rng) const;
  // Highest-probability action, lowest index on ties.
  ActionId greedy_action(ObservationId o) const;

  bool operator==(const PrimitivePolicy&) const = default;

 private:
  std::vector<std::vector<double>> table_;
  std::vector<std::vector<double>> cdf_;
  int action_count_ = 0;
};

// Probability of stopping after `steps_taken` actions, given the observation of
// the state the option has just reached.
using TerminationFn = std::function<double(int steps_taken, ObservationId observation)>;

struct Option {
  OptionId id;
  PrimitivePolicy sub_policy;
  TerminationFn termination;
  // Observations where the option may start; empty means everywhere.
  std::vector<bool> initiation;
  // Upper bound on the option's length when known (0 = unbounded). Used by the
  // exact options oracle to size its state space.
  int duration_limit = 0;

  bool can_start(ObservationId o) const {
    return initiation.empty() || (o < std::ssize(initiation) && initiation[o]);
  }

  // Runs `policy` for exactly `steps` actions.
  static Option fixed_length(OptionId id, PrimitivePolicy policy, int steps);
};

// Options-based policy: picks an option whenever the previous one has
// terminated, with probabilities conditioned on the current observation.
class OptionsPolicy {
 public:
  // `probabilities[o][k]` is the chance of option k at observation o. A single
  // row applies to every observation.
  OptionsPolicy(std::vector<Option> options, std::vector<std::vector<double>> probabilities);

  std::span<const Option> options() const { return options_; }
  const Option& option(std::size_t index) const { return options_.at(index); }
  std::optional<std::size_t> find(const OptionId& id) const;

  // Option probabilities at `o`, restricted to options that may start there.
  // A shared row is renormalized over the admissible options. Throws
  // std::runtime_error when no positive-probability option may start at `o`.
  std::vector<double> distribution(ObservationId o) const;
  double probability(ObservationId o, const OptionId& id) const;

  std::size_t sample(ObservationId o, RandomStream& rng) const;

 private:
  std::vector<Option> options_;
  std::vector<std::vector<double>> probabilities_;
};

}  // namespace ope
