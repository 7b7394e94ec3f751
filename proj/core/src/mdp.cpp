#include "ope/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ope {
namespace {

constexpr double kSumTolerance = 1e-12;

void check_sum(double total, const std::string& what) {
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw std::invalid_argument(what + " sums to " + std::to_string(total) + ", not 1");
  }
}

template <typename Entry>
std::vector<double> cumulative(const std::vector<Entry>& entries) {
  std::vector<double> cdf;
  cdf.reserve(entries.size());
  double running = 0.0;
  for (const auto& e : entries) {
    running += e.probability;
    cdf.push_back(running);
  }
  return cdf;
}

}  // namespace

TabularMdp::TabularMdp(MdpDefinition d)
    : name_(std::move(d.name)),
      state_count_(d.state_count),
      action_count_(d.action_count),
      observation_count_(d.observation_count),
      horizon_(d.horizon),
      initial_(std::move(d.initial_distribution)),
      transitions_(std::move(d.transitions)),
      emissions_(std::move(d.emissions)),
      terminal_(std::move(d.terminal)),
      reward_bounds_(d.reward_bounds) {
  if (state_count_ <= 0 || action_count_ <= 0) {
    throw std::invalid_argument(name_ + ": state and action counts must be positive");
  }
  if (horizon_ <= 0) throw std::invalid_argument(name_ + ": horizon must be positive");
  if (!(reward_bounds_.min <= reward_bounds_.max)) {
    throw std::invalid_argument(name_ + ": reward bounds are inverted");
  }
  if (std::ssize(initial_) != state_count_) {
    throw std::invalid_argument(name_ + ": initial distribution has wrong size");
  }
  if (terminal_.empty()) terminal_.assign(state_count_, false);
  if (std::ssize(terminal_) != state_count_) {
    throw std::invalid_argument(name_ + ": terminal mask has wrong size");
  }

  double total = 0.0;
  for (StateId s = 0; s < state_count_; ++s) {
    if (initial_[s] < 0.0) throw std::invalid_argument(name_ + ": negative initial probability");
    total += initial_[s];
    if (initial_[s] > 0.0) {
      initial_support_.push_back(s);
      initial_cdf_.push_back(total);
    }
  }
  check_sum(total, name_ + ": initial distribution");

  const auto pairs = static_cast<std::size_t>(state_count_) * action_count_;
  if (transitions_.size() != pairs) {
    throw std::invalid_argument(name_ + ": expected one outcome list per (state, action)");
  }
  transition_cdf_.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    auto& outcomes = transitions_[i];
    std::erase_if(outcomes, [](const Transition& t) { return t.probability == 0.0; });
    const std::string where = name_ + ": transition (state " +
                              std::to_string(i / action_count_) + ", action " +
                              std::to_string(i % action_count_) + ")";
    double sum = 0.0;
    for (const auto& t : outcomes) {
      if (t.probability < 0.0) throw std::invalid_argument(where + " has negative probability");
      if (t.next < 0 || t.next >= state_count_) {
        throw std::invalid_argument(where + " leads outside the state space");
      }
      if (!std::isfinite(t.reward) || t.reward < reward_bounds_.min ||
          t.reward > reward_bounds_.max) {
        throw std::invalid_argument(where + " emits reward " + std::to_string(t.reward) +
                                    " outside the declared bounds");
      }
      sum += t.probability;
    }
    check_sum(sum, where);
    transition_cdf_.push_back(cumulative(outcomes));
  }

  if (emissions_.empty()) {
    observation_count_ = state_count_;
    emissions_.resize(state_count_);
    for (StateId s = 0; s < state_count_; ++s) emissions_[s] = {{s, 1.0}};
  }
  if (observation_count_ <= 0) {
    throw std::invalid_argument(name_ + ": observation count must be positive");
  }
  if (std::ssize(emissions_) != state_count_) {
    throw std::invalid_argument(name_ + ": expected one observation law per state");
  }
  emission_cdf_.reserve(emissions_.size());
  for (StateId s = 0; s < state_count_; ++s) {
    auto& law = emissions_[s];
    std::erase_if(law, [](const Emission& e) { return e.probability == 0.0; });
    double sum = 0.0;
    for (const auto& e : law) {
      if (e.probability < 0.0 || e.observation < 0 || e.observation >= observation_count_) {
        throw std::invalid_argument(name_ + ": invalid observation law at state " +
                                    std::to_string(s));
      }
      sum += e.probability;
    }
    check_sum(sum, name_ + ": observation law at state " + std::to_string(s));
    emission_cdf_.push_back(cumulative(law));
  }
}

StateId TabularMdp::sample_initial(RandomStream& rng) const {
  return initial_support_[rng.from_cdf(initial_cdf_)];
}

ObservationId TabularMdp::sample_observation(StateId s, RandomStream& rng) const {
  const auto& law = emissions_[s];
  if (law.size() == 1) return law.front().observation;
  return law[rng.from_cdf(emission_cdf_[s])].observation;
}

const Transition& TabularMdp::sample_transition(StateId s, ActionId a, RandomStream& rng) const {
  const auto index = static_cast<std::size_t>(s) * action_count_ + a;
  const auto& outcomes = transitions_[index];
  if (outcomes.size() == 1) return outcomes.front();
  return outcomes[rng.from_cdf(transition_cdf_[index])];
}

}  // namespace ope
