#include "ope/statistics.hpp"

#include <stdexcept>

namespace ope {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 32;
  if (values.size() <= kBlock) {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
  }
  const auto half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty sequence");
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double sample_var(std::span<const double> xs) { return sample_cov(xs, xs); }

double sample_cov(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("sample_cov: lengths differ");
  if (xs.size() < 2) throw std::invalid_argument("sample statistics need at least two points");
  RunningCovariance acc;
  for (std::size_t i = 0; i < xs.size(); ++i) acc.add(xs[i], ys[i]);
  return acc.covariance();
}

double RunningCovariance::covariance() const {
  if (count_ < 2) throw std::invalid_argument("sample statistics need at least two points");
  return comoment_ / static_cast<double>(count_ - 1);
}

double RunningCovariance::variance_y() const {
  if (count_ < 2) throw std::invalid_argument("sample statistics need at least two points");
  return m2_y_ / static_cast<double>(count_ - 1);
}

}  // namespace ope
