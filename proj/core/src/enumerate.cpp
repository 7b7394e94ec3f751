#include "ope/enumerate.hpp"

#include <string>

#include "ope/types.hpp"

namespace ope {
namespace {

// Depth-first walk over primitive-policy outcomes. With a null visitor it only
// counts leaves, stopping once the count passes the limit.
class PrimitiveWalker {
 public:
  PrimitiveWalker(const TabularMdp& mdp, const PrimitivePolicy& policy,
                  const TrajectoryVisitor* visit, std::size_t limit)
      : mdp_(mdp), policy_(policy), visit_(visit), limit_(limit) {}

  std::size_t run() {
    const auto init = mdp_.initial_distribution();
    for (StateId s = 0; s < mdp_.state_count() && leaves_ <= limit_; ++s) {
      if (init[s] > 0.0) walk(s, 0, init[s]);
    }
    return leaves_;
  }

 private:
  void walk(StateId s, int t, double probability) {
    if (leaves_ > limit_) return;
    if (t == mdp_.horizon() || mdp_.is_terminal(s)) {
      ++leaves_;
      if (visit_) (*visit_)(path_, probability);
      return;
    }
    for (const auto& e : mdp_.emissions(s)) {
      const auto actions = policy_.distribution(e.observation);
      for (ActionId a = 0; a < std::ssize(actions); ++a) {
        if (actions[a] <= 0.0) continue;
        for (const auto& next : mdp_.outcomes(s, a)) {
          path_.observations.push_back(e.observation);
          path_.actions.push_back(a);
          path_.rewards.push_back(next.reward);
          path_.behavior_probs.push_back(actions[a]);
          walk(next.next, t + 1, probability * e.probability * actions[a] * next.probability);
          path_.observations.pop_back();
          path_.actions.pop_back();
          path_.rewards.pop_back();
          path_.behavior_probs.pop_back();
        }
      }
    }
  }

  const TabularMdp& mdp_;
  const PrimitivePolicy& policy_;
  const TrajectoryVisitor* visit_;
  std::size_t limit_;
  std::size_t leaves_ = 0;
  Trajectory path_;
};

class OptionsWalker {
 public:
  OptionsWalker(const TabularMdp& mdp, const OptionsPolicy& policy,
                const OptionsTrajectoryVisitor* visit, std::size_t limit)
      : mdp_(mdp), policy_(policy), visit_(visit), limit_(limit) {}

  std::size_t run() {
    const auto init = mdp_.initial_distribution();
    for (StateId s = 0; s < mdp_.state_count() && leaves_ <= limit_; ++s) {
      if (init[s] > 0.0) walk(s, 0, nullptr, 0, init[s]);
    }
    return leaves_;
  }

 private:
  void walk(StateId s, int t, const Option* active, int taken, double probability) {
    if (leaves_ > limit_) return;
    if (t == mdp_.horizon() || mdp_.is_terminal(s)) {
      ++leaves_;
      if (visit_) {
        const bool truncated = !path_.segments.empty() && !mdp_.is_terminal(s);
        if (truncated) path_.segments.back().truncated = true;
        (*visit_)(path_, probability);
        if (truncated) path_.segments.back().truncated = false;
      }
      return;
    }
    for (const auto& e : mdp_.emissions(s)) {
      const double beta = active ? active->termination(taken, e.observation) : 1.0;
      if (beta > 0.0) {
        const auto mu = policy_.distribution(e.observation);
        for (std::size_t k = 0; k < mu.size(); ++k) {
          if (mu[k] <= 0.0) continue;
          Segment segment;
          segment.option = policy_.option(k).id;
          segment.option_probability = mu[k];
          segment.start_observation = e.observation;
          path_.segments.push_back(std::move(segment));
          act(s, t, policy_.option(k), 0, e.observation,
              probability * e.probability * beta * mu[k]);
          path_.segments.pop_back();
        }
      }
      if (beta < 1.0) {
        act(s, t, *active, taken, e.observation, probability * e.probability * (1.0 - beta));
      }
    }
  }

  void act(StateId s, int t, const Option& option, int taken, ObservationId o,
           double probability) {
    const auto actions = option.sub_policy.distribution(o);
    for (ActionId a = 0; a < std::ssize(actions); ++a) {
      if (actions[a] <= 0.0) continue;
      for (const auto& next : mdp_.outcomes(s, a)) {
        auto& segment = path_.segments.back();
        const double saved = segment.accumulated_reward;
        segment.steps.observations.push_back(o);
        segment.steps.actions.push_back(a);
        segment.steps.rewards.push_back(next.reward);
        segment.steps.behavior_probs.push_back(actions[a]);
        segment.accumulated_reward += next.reward;
        walk(next.next, t + 1, &option, taken + 1, probability * actions[a] * next.probability);
        auto& same = path_.segments.back();
        same.steps.observations.pop_back();
        same.steps.actions.pop_back();
        same.steps.rewards.pop_back();
        same.steps.behavior_probs.pop_back();
        same.accumulated_reward = saved;
      }
    }
  }

  const TabularMdp& mdp_;
  const OptionsPolicy& policy_;
  const OptionsTrajectoryVisitor* visit_;
  std::size_t limit_;
  std::size_t leaves_ = 0;
  HighLevelTrajectory path_;
};

void refuse(std::size_t limit) {
  throw NumericalError("more than " + std::to_string(limit) +
                       " trajectories; too many to enumerate, use Monte Carlo instead");
}

}  // namespace

std::size_t count_trajectories(const TabularMdp& mdp, const PrimitivePolicy& policy,
                               std::size_t limit) {
  return PrimitiveWalker(mdp, policy, nullptr, limit).run();
}

std::size_t count_trajectories(const TabularMdp& mdp, const OptionsPolicy& policy,
                               std::size_t limit) {
  return OptionsWalker(mdp, policy, nullptr, limit).run();
}

void enumerate_trajectories(const TabularMdp& mdp, const PrimitivePolicy& policy,
                            const TrajectoryVisitor& visit, std::size_t limit) {
  if (count_trajectories(mdp, policy, limit) > limit) refuse(limit);
  PrimitiveWalker(mdp, policy, &visit, limit).run();
}

void enumerate_trajectories(const TabularMdp& mdp, const OptionsPolicy& policy,
                            const OptionsTrajectoryVisitor& visit, std::size_t limit) {
  if (count_trajectories(mdp, policy, limit) > limit) refuse(limit);
  OptionsWalker(mdp, policy, &visit, limit).run();
}

}  // namespace ope
