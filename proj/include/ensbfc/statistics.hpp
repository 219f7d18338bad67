#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ensbfc {

// Welford accumulator.
class RunningMean {
 public:
  void add(double value) noexcept;
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;  // unbiased; 0 for fewer than 2 values
  double std_error() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Arithmetic mean computed as first + mean of deviations from the first
// value. A constant sample returns that constant bit-exactly.
double stable_mean(std::span<const double> values) noexcept;

// Empirical quantile with linear interpolation between order statistics
// (position p * (n - 1)). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

struct QuantileSummary {
  double mean = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
};

QuantileSummary summarize(std::vector<double> values);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares y = intercept + slope * x (at least 2 distinct x).
LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace ensbfc
