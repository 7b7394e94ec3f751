#pragma once

#include <span>
#include <string>
#include <vector>

#include "ope/random.hpp"
#include "ope/types.hpp"

namespace ope {

struct Transition {
  StateId next = 0;
  double probability = 0.0;
  double reward = 0.0;
};

struct Emission {
  ObservationId observation = 0;
  double probability = 0.0;
};

struct RewardBounds {
  double min = 0.0;
  double max = 0.0;
};

// Plain description of a finite-horizon MDP; validated by TabularMdp.
struct MdpDefinition {
  std::string name;
  int state_count = 0;
  int action_count = 0;
  int observation_count = 0;
  int horizon = 0;
  std::vector<double> initial_distribution;
  // Outcomes of (state, action), indexed state * action_count + action.
  std::vector<std::vector<Transition>> transitions;
  // Observation law per state. Empty means fully observable (observation = state).
  std::vector<std::vector<Emission>> emissions;
  std::vector<bool> terminal;
  RewardBounds reward_bounds;
};

// Immutable finite-horizon MDP with discrete states, actions and observations.
//
// An episode starts from the initial distribution and stops on reaching a
// terminal state or after `horizon()` actions, whichever comes first. Every
// probability vector sums to one within 1e-12 and every reward lies within the
// declared bounds; construction throws std::invalid_argument otherwise.
class TabularMdp {
 public:
  explicit TabularMdp(MdpDefinition definition);

  const std::string& name() const { return name_; }
  int state_count() const { return state_count_; }
  int action_count() const { return action_count_; }
  int observation_count() const { return observation_count_; }
  int horizon() const { return horizon_; }
  RewardBounds reward_bounds() const { return reward_bounds_; }

  bool is_terminal(StateId s) const { return terminal_[s]; }
  std::span<const double> initial_distribution() const { return initial_; }
  std::span<const Transition> outcomes(StateId s, ActionId a) const {
    return transitions_[static_cast<std::size_t>(s) * action_count_ + a];
  }
  std::span<const Emission> emissions(StateId s) const { return emissions_[s]; }

  StateId sample_initial(RandomStream& rng) const;
  ObservationId sample_observation(StateId s, RandomStream& rng) const;
  const Transition& sample_transition(StateId s, ActionId a, RandomStream& rng) const;

 private:
  std::string name_;
  int state_count_;
  int action_count_;
  int observation_count_;
  int horizon_;
  std::vector<double> initial_;
  std::vector<StateId> initial_support_;
  std::vector<double> initial_cdf_;
  std::vector<std::vector<Transition>> transitions_;
  std::vector<std::vector<double>> transition_cdf_;
  std::vector<std::vector<Emission>> emissions_;
  std::vector<std::vector<double>> emission_cdf_;
  std::vector<bool> terminal_;
  RewardBounds reward_bounds_;
};

}  // namespace ope
