#pragma once

#include <cstddef>
#include <span>

namespace ope {

// Pairwise (cascade) summation in a fixed order; deterministic for a given input.
double pairwise_sum(std::span<const double> values);
double mean(std::span<const double> values);

// Unbiased (n - 1 denominator) sample statistics. Throw std::invalid_argument
// for fewer than two points or mismatched lengths.
double sample_var(std::span<const double> xs);
double sample_cov(std::span<const double> xs, std::span<const double> ys);

// Streaming co-moment accumulator (Welford-style updates).
class RunningCovariance {
 public:
  void add(double x, double y) {
    ++count_;
    const double n = static_cast<double>(count_);
    const double dx = x - mean_x_;
    mean_x_ += dx / n;
    const double dy = y - mean_y_;
    mean_y_ += dy / n;
    comoment_ += dx * (y - mean_y_);
    m2_y_ += dy * (y - mean_y_);
  }

  std::size_t count() const { return count_; }
  double mean_x() const { return mean_x_; }
  double mean_y() const { return mean_y_; }
  double covariance() const;  // unbiased; requires count() >= 2
  double variance_y() const;  // unbiased; requires count() >= 2

 private:
  std::size_t count_ = 0;
  double mean_x_ = 0.0;
  double mean_y_ = 0.0;
  double comoment_ = 0.0;
  double m2_y_ = 0.0;
};

}  // namespace ope
