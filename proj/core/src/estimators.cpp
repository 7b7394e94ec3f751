#include "ope/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "ope/statistics.hpp"

namespace ope {
namespace {

constexpr std::array kAll = {Estimator::is,           Estimator::pdis,
                             Estimator::wis,          Estimator::cwpdis,
                             Estimator::options_pdis, Estimator::partitioned_pdis,
                             Estimator::incris};

void require_data(std::size_t n) {
  if (n == 0) throw std::invalid_argument("estimators need a non-empty dataset");
}

EstimateReport finish(Estimator id, double estimate, std::span<const double> final_weights) {
  if (!std::isfinite(estimate)) {
    throw NumericalError(std::string(to_string(id)) + " produced a non-finite estimate");
  }
  EstimateReport report;
  report.estimator = id;
  report.estimate = estimate;
  report.n = final_weights.size();
  double sum = 0.0, sum_sq = 0.0, max_weight = 0.0;
  for (double w : final_weights) {
    sum += w;
    sum_sq += w * w;
    max_weight = std::max(max_weight, w);
  }
  report.diagnostics.effective_sample_size = sum_sq > 0.0 ? sum * sum / sum_sq : 0.0;
  report.diagnostics.max_weight = max_weight;
  return report;
}

double final_weight(const WeightedTrajectory& t) {
  if (t.ratios.empty()) return 1.0;
  return cumulative_weights(t.ratios).back();
}

std::vector<double> final_weights(std::span<const WeightedTrajectory> data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& t : data) out.push_back(final_weight(t));
  return out;
}

double pdis_return(const WeightedTrajectory& t, std::size_t from, std::size_t to) {
  const auto rho = cumulative_weights(std::span(t.ratios).subspan(from, to - from));
  double total = 0.0;
  for (std::size_t u = from; u < to; ++u) total += rho[u - from] * t.rewards[u];
  return total;
}

std::size_t longest(std::span<const WeightedTrajectory> data) {
  std::size_t h = 0;
  for (const auto& t : data) h = std::max(h, t.size());
  return h;
}

}  // namespace

std::string_view to_string(Estimator estimator) {
  switch (estimator) {
    case Estimator::is: return "is";
    case Estimator::pdis: return "pdis";
    case Estimator::wis: return "wis";
    case Estimator::cwpdis: return "cwpdis";
    case Estimator::options_pdis: return "options_pdis";
    case Estimator::partitioned_pdis: return "partitioned_pdis";
    case Estimator::incris: return "incris";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view id) {
  for (Estimator e : kAll) {
    if (to_string(e) == id) return e;
  }
  throw ConfigError("unknown estimator '" + std::string(id) + "'");
}

std::span<const Estimator> all_estimators() { return kAll; }

EstimateReport is_estimate(std::span<const WeightedTrajectory> data) {
  require_data(data.size());
  const auto weights = final_weights(data);
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    double g = 0.0;
    for (double r : data[i].rewards) g += r;
    terms[i] = weights[i] * g;
  }
  return finish(Estimator::is, mean(terms), weights);
}

EstimateReport pdis_estimate(std::span<const WeightedTrajectory> data) {
  require_data(data.size());
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) terms[i] = pdis_return(data[i], 0, data[i].size());
  return finish(Estimator::pdis, mean(terms), final_weights(data));
}

EstimateReport wis_estimate(std::span<const WeightedTrajectory> data) {
  require_data(data.size());
  const auto weights = final_weights(data);
  std::vector<double> weighted(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    double g = 0.0;
    for (double r : data[i].rewards) g += r;
    weighted[i] = weights[i] * g;
  }
  const double total = pairwise_sum(weights);
  const double estimate = total > 0.0 ? pairwise_sum(weighted) / total : 0.0;
  return finish(Estimator::wis, estimate, weights);
}

EstimateReport cwpdis_estimate(std::span<const WeightedTrajectory> data) {
  require_data(data.size());
  const auto horizon = longest(data);
  std::vector<std::vector<double>> rho;
  rho.reserve(data.size());
  for (const auto& t : data) rho.push_back(cumulative_weights(t.ratios));

  std::vector<double> per_step(horizon, 0.0);
  std::vector<double> weights(data.size()), weighted(data.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& r = rho[i];
      const bool live = t < r.size();
      weights[i] = live ? r[t] : (r.empty() ? 1.0 : r.back());
      weighted[i] = live ? weights[i] * data[i].rewards[t] : 0.0;
    }
    const double total = pairwise_sum(weights);
    per_step[t] = total > 0.0 ? pairwise_sum(weighted) / total : 0.0;
  }
  return finish(Estimator::cwpdis, pairwise_sum(per_step), final_weights(data));
}

EstimateReport partitioned_pdis_estimate(std::span<const WeightedTrajectory> data,
                                         std::span<const std::size_t> cuts) {
  require_data(data.size());
  if (cuts.size() != data.size()) {
    throw std::invalid_argument("partitioned PDIS needs one cut per trajectory");
  }
  std::vector<double> terms(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& t = data[i];
    if (cuts[i] > t.size()) {
      throw std::invalid_argument("cut index " + std::to_string(cuts[i]) +
                                  " is past the end of trajectory " + std::to_string(i) +
                                  " (length " + std::to_string(t.size()) + ")");
    }
    terms[i] = pdis_return(t, 0, cuts[i]) + pdis_return(t, cuts[i], t.size());
  }
  return finish(Estimator::partitioned_pdis, mean(terms), final_weights(data));
}

EstimateReport is_estimate(const Dataset& data, const PrimitivePolicy& evaluation) {
  return is_estimate(weigh(data, evaluation));
}

EstimateReport pdis_estimate(const Dataset& data, const PrimitivePolicy& evaluation) {
  return pdis_estimate(weigh(data, evaluation));
}

EstimateReport wis_estimate(const Dataset& data, const PrimitivePolicy& evaluation) {
  return wis_estimate(weigh(data, evaluation));
}

EstimateReport cwpdis_estimate(const Dataset& data, const PrimitivePolicy& evaluation) {
  return cwpdis_estimate(weigh(data, evaluation));
}

EstimateReport incris_estimate(const Dataset& data, const PrimitivePolicy& evaluation) {
  return incris_estimate(weigh(data, evaluation));
}

EstimateReport partitioned_pdis_estimate(const Dataset& data, const PrimitivePolicy& evaluation,
                                         const CutFn& cut) {
  std::vector<std::size_t> cuts;
  cuts.reserve(data.size());
  for (const auto& t : data.trajectories) cuts.push_back(cut(t));
  return partitioned_pdis_estimate(weigh(data, evaluation), cuts);
}

std::vector<OptionWeightedSegment> option_weighted_segments(const HighLevelTrajectory& trajectory,
                                                            const OptionsPolicy& evaluation,
                                                            const std::set<OptionId>& changed) {
  trajectory.validate();
  std::vector<OptionWeightedSegment> out;
  out.reserve(trajectory.size());
  double option_weight = 1.0;
  double carried = 1.0;
  for (const auto& segment : trajectory.segments) {
    const auto index = evaluation.find(segment.option);
    const double mu_e =
        index ? evaluation.probability(segment.start_observation, segment.option) : 0.0;
    option_weight *= mu_e / segment.option_probability;

    OptionWeightedSegment w;
    w.option_weight = option_weight;
    w.carried_weight = carried;
    w.changed = changed.contains(segment.option);
    if (!w.changed) {
      w.payoff = segment.accumulated_reward;
    } else if (option_weight != 0.0) {
      const auto& steps = segment.steps;
      const auto& sub_policy = evaluation.option(*index).sub_policy;
      double rho = 1.0;
      for (std::size_t b = 0; b < steps.size(); ++b) {
        rho *= sub_policy.probability(steps.observations[b], steps.actions[b]) /
               steps.behavior_probs[b];
        w.payoff += rho * steps.rewards[b];
      }
      carried *= rho;
    }
    out.push_back(w);
  }
  return out;
}

EstimateReport options_pdis_estimate(const OptionsDataset& data, const OptionsPolicy& evaluation,
                                     const std::set<OptionId>& changed) {
  require_data(data.size());
  std::vector<double> terms(data.size()), weights(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    double total = 0.0;
    for (const auto& w : option_weighted_segments(data.trajectories[i], evaluation, changed)) {
      total += w.carried_weight * w.option_weight * w.payoff;
    }
    terms[i] = total;
    weights[i] = final_weight(weigh(data.trajectories[i], evaluation, changed));
  }
  return finish(Estimator::options_pdis, mean(terms), weights);
}

double covariance_split_bias(std::span<const double> w1, std::span<const double> w2r) {
  return sample_cov(w1, w2r);
}

}  // namespace ope
