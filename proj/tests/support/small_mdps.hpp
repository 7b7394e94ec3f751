#pragma once

// Small hand-built MDPs shared by the unit and acceptance tests. All of them
// are small enough to enumerate every trajectory.

#include <utility>
#include <vector>

#include "ope/mdp.hpp"
#include "ope/policy.hpp"

namespace ope::testing {

// Two recurrent states, two actions, H = 2, fully observable.
inline TabularMdp two_state_mdp() {
  MdpDefinition d;
  d.name = "two-state";
  d.state_count = 2;
  d.action_count = 2;
  d.observation_count = 2;
  d.horizon = 2;
  d.initial_distribution = {0.6, 0.4};
  d.transitions = {
      {{0, 0.7, 1.0}, {1, 0.3, 0.0}},   // s0 a0
      {{1, 1.0, 2.0}},                  // s0 a1
      {{0, 0.5, 0.5}, {1, 0.5, -1.0}},  // s1 a0
      {{1, 0.2, 3.0}, {0, 0.8, 0.0}},   // s1 a1
  };
  d.terminal = {false, false};
  d.reward_bounds = {-1.0, 3.0};
  return TabularMdp(std::move(d));
}

inline PrimitivePolicy two_state_behavior() { return PrimitivePolicy({{0.5, 0.5}, {0.3, 0.7}}); }
inline PrimitivePolicy two_state_evaluation() { return PrimitivePolicy({{0.8, 0.2}, {0.6, 0.4}}); }

// Four live states plus a terminal one, three noisy observations, H = 4.
// Action 1 from state 3 ends the episode early.
inline TabularMdp noisy_small_mdp() {
  MdpDefinition d;
  d.name = "noisy-small";
  d.state_count = 5;
  d.action_count = 2;
  d.observation_count = 3;
  d.horizon = 4;
  d.initial_distribution = {0.5, 0.5, 0.0, 0.0, 0.0};
  d.transitions = {
      {{1, 0.6, 0.0}, {2, 0.4, 1.0}},   // s0 a0
      {{3, 1.0, -0.5}},                 // s0 a1
      {{2, 0.5, 2.0}, {0, 0.5, 0.0}},   // s1 a0
      {{3, 0.9, 1.0}, {1, 0.1, -1.0}},  // s1 a1
      {{0, 1.0, 0.25}},                 // s2 a0
      {{3, 0.3, 1.5}, {1, 0.7, 0.0}},   // s2 a1
      {{2, 1.0, -1.0}},                 // s3 a0
      {{4, 1.0, 3.0}},                  // s3 a1
      {{4, 1.0, 0.0}},                  // terminal
      {{4, 1.0, 0.0}},
  };
  d.emissions = {
      {{0, 0.8}, {1, 0.2}},
      {{1, 0.7}, {2, 0.3}},
      {{2, 1.0}},
      {{0, 0.5}, {2, 0.5}},
      {{0, 1.0}},
  };
  d.terminal = {false, false, false, false, true};
  d.reward_bounds = {-1.0, 3.0};
  return TabularMdp(std::move(d));
}

inline PrimitivePolicy noisy_small_behavior() {
  return PrimitivePolicy({{0.5, 0.5}, {0.25, 0.75}, {0.6, 0.4}});
}
inline PrimitivePolicy noisy_small_evaluation() {
  return PrimitivePolicy({{0.9, 0.1}, {0.5, 0.5}, {0.2, 0.8}});
}

// Two steps that always end in the funnel state 3, then two more steps.
// Reaching state 3 is the stationary event used to partition trajectories.
inline constexpr ObservationId kFunnel = 3;

inline TabularMdp funnel_mdp() {
  MdpDefinition d;
  d.name = "funnel";
  d.state_count = 6;
  d.action_count = 2;
  d.observation_count = 6;
  d.horizon = 4;
  d.initial_distribution = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  d.transitions = {
      {{1, 0.7, 1.0}, {2, 0.3, 0.0}},  // s0 a0
      {{2, 1.0, 0.5}},                 // s0 a1
      {{3, 1.0, 2.0}},                 // s1 a0
      {{3, 1.0, 0.0}},                 // s1 a1
      {{3, 1.0, 1.0}},                 // s2 a0
      {{3, 1.0, -1.0}},                // s2 a1
      {{4, 0.5, 2.0}, {4, 0.5, 0.0}},  // s3 a0
      {{4, 1.0, -1.0}},                // s3 a1
      {{5, 1.0, 1.0}},                 // s4 a0
      {{5, 1.0, 0.0}},                 // s4 a1
      {{5, 1.0, 0.0}},                 // terminal
      {{5, 1.0, 0.0}},
  };
  d.terminal = {false, false, false, false, false, true};
  d.reward_bounds = {-1.0, 2.0};
  return TabularMdp(std::move(d));
}

inline PrimitivePolicy funnel_behavior() {
  return PrimitivePolicy(std::vector<std::vector<double>>(6, {0.5, 0.5}));
}
inline PrimitivePolicy funnel_evaluation() {
  return PrimitivePolicy({{0.9, 0.1}, {0.2, 0.8}, {0.7, 0.3}, {0.8, 0.2}, {0.3, 0.7}, {0.5, 0.5}});
}

// Two options on the noisy small MDP: "left" prefers a0 and stops with
// probability 0.5 after each step (always on observation 2); "pair" runs a
// fixed sub-policy for exactly two steps.
inline std::vector<Option> toy_options(const PrimitivePolicy& left_policy) {
  Option left;
  left.id = "left";
  left.sub_policy = left_policy;
  left.termination = [](int, ObservationId o) { return o == 2 ? 1.0 : 0.5; };
  Option pair = Option::fixed_length("pair", PrimitivePolicy({{0.3, 0.7}, {0.6, 0.4}, {0.5, 0.5}}), 2);
  return {left, pair};
}

inline OptionsPolicy toy_options_behavior() {
  return OptionsPolicy(toy_options(PrimitivePolicy({{0.7, 0.3}, {0.6, 0.4}, {0.8, 0.2}})),
                       {{0.5, 0.5}, {0.3, 0.7}, {0.6, 0.4}});
}

// Changes both the option probabilities and the sub-policy of "left".
inline OptionsPolicy toy_options_evaluation() {
  return OptionsPolicy(toy_options(PrimitivePolicy({{0.9, 0.1}, {0.5, 0.5}, {0.4, 0.6}})),
                       {{0.8, 0.2}, {0.5, 0.5}, {0.1, 0.9}});
}

// Three steps. The step-1 reward depends on the step-0 action through the
// state; step 2 starts from a fresh state whose reward depends only on its own
// action. Dropping the step-0 ratio is therefore badly biased at t = 1 and
// harmless at t = 2.
inline TabularMdp memory_mdp() {
  MdpDefinition d;
  d.name = "memory";
  d.state_count = 5;
  d.action_count = 2;
  d.observation_count = 5;
  d.horizon = 3;
  d.initial_distribution = {1.0, 0.0, 0.0, 0.0, 0.0};
  d.transitions = {
      {{1, 1.0, 0.0}},                 // s0 a0: remember a0
      {{2, 1.0, 0.0}},                 // s0 a1: remember a1
      {{3, 1.0, 4.0}},                 // s1 a0
      {{3, 1.0, 4.0}},                 // s1 a1
      {{3, 1.0, -4.0}},                // s2 a0
      {{3, 1.0, -4.0}},                // s2 a1
      {{4, 1.0, 1.0}},                 // s3 a0
      {{4, 1.0, 0.0}},                 // s3 a1
      {{4, 1.0, 0.0}},                 // terminal
      {{4, 1.0, 0.0}},
  };
  d.terminal = {false, false, false, false, true};
  d.reward_bounds = {-4.0, 4.0};
  return TabularMdp(std::move(d));
}

inline PrimitivePolicy memory_behavior() {
  return PrimitivePolicy(std::vector<std::vector<double>>(5, {0.5, 0.5}));
}
inline PrimitivePolicy memory_evaluation() {
  return PrimitivePolicy({{0.8, 0.2}, {0.5, 0.5}, {0.5, 0.5}, {0.7, 0.3}, {0.5, 0.5}});
}

}  // namespace ope::testing
