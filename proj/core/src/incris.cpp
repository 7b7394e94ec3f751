#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ope/estimators.hpp"
#include "ope/statistics.hpp"

namespace ope {

// For the reward at step t (0-based) and each k in 0..t+1, the full weight
// splits into A_k (ratios of steps 0..t-k) and B_k (ratios of the k most recent
// steps t-k+1..t). The bias of keeping only B_k is estimated by the sample
// covariance C_k of (A_k, B_k r_t), the variance of the resulting mean by the
// sample variance of B_k r_t over n. The k minimizing C_k^2 + V_k / n is kept,
// ties going to the larger k, and the step estimate is mean(B_k r_t).
//
// Prefix products give every A_k directly and B_k grows by one multiply per k,
// so each trajectory costs O(H^2) multiplies in total.
EstimateReport incris_estimate(std::span<const WeightedTrajectory> data) {
  const auto n = data.size();
  if (n < 2) {
    throw std::invalid_argument(
        "INCRIS needs at least two trajectories to estimate covariances; use PDIS for n = 1");
  }
  std::size_t horizon = 0;
  for (const auto& t : data) horizon = std::max(horizon, t.size());

  // prefix[i][j] = product of the first j ratios, padded with ratio 1.
  std::vector<std::vector<double>> prefix(n);
  std::vector<std::vector<double>> ratios(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto rho = cumulative_weights(data[i].ratios);
    auto& p = prefix[i];
    p.assign(horizon + 1, rho.empty() ? 1.0 : rho.back());
    p[0] = 1.0;
    std::copy(rho.begin(), rho.end(), p.begin() + 1);
    ratios[i] = data[i].ratios;
    ratios[i].resize(horizon, 1.0);
  }

  std::vector<double> step_estimates(horizon, 0.0);
  std::vector<int> chosen(horizon, 0);
  std::vector<RunningCovariance> split;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::size_t splits = t + 2;  // k = 0..t+1
    split.assign(splits, RunningCovariance{});
    for (std::size_t i = 0; i < n; ++i) {
      const double r = t < data[i].size() ? data[i].rewards[t] : 0.0;
      const auto& p = prefix[i];
      const auto& f = ratios[i];
      double recent = 1.0;
      for (std::size_t k = 0; k < splits; ++k) {
        split[k].add(p[t + 1 - k], recent * r);
        if (k <= t) recent *= f[t - k];
      }
    }
    std::size_t best = splits - 1;
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t k = splits; k-- > 0;) {
      const double c = split[k].covariance();
      const double mse = c * c + split[k].variance_y() * inv_n;
      if (mse < best_mse) {
        best_mse = mse;
        best = k;
      }
    }
    chosen[t] = static_cast<int>(best);
    step_estimates[t] = split[best].mean_y();
  }

  const double estimate = pairwise_sum(step_estimates);
  if (!std::isfinite(estimate)) throw NumericalError("incris produced a non-finite estimate");

  EstimateReport report;
  report.estimator = Estimator::incris;
  report.estimate = estimate;
  report.n = n;
  double sum = 0.0, sum_sq = 0.0, max_weight = 0.0;
  for (const auto& p : prefix) {
    const double w = p.back();
    sum += w;
    sum_sq += w * w;
    max_weight = std::max(max_weight, w);
  }
  report.diagnostics.effective_sample_size = sum_sq > 0.0 ? sum * sum / sum_sq : 0.0;
  report.diagnostics.max_weight = max_weight;
  report.diagnostics.chosen_suffix_lengths = std::move(chosen);
  return report;
}

}  // namespace ope
