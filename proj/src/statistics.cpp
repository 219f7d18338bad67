#include "ensbfc/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ensbfc {

void RunningMean::add(double value) noexcept {
  ++n_;
  const double delta = value - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (value - mean_);
}

double RunningMean::variance() const noexcept {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double RunningMean::std_error() const noexcept {
  return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double stable_mean(std::span<const double> values) noexcept {
  if (values.empty()) return 0.0;
  const double first = values.front();
  double deviation = 0.0;
  for (double v : values) deviation += v - first;
  return first + deviation / static_cast<double>(values.size());
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile level outside [0, 1]");
  const double position = p * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const std::size_t upper = std::min(lower + 1, sorted.size() - 1);
  const double weight = position - static_cast<double>(lower);
  if (weight == 0.0 || sorted[lower] == sorted[upper]) return sorted[lower];
  return sorted[lower] + weight * (sorted[upper] - sorted[lower]);
}

QuantileSummary summarize(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return QuantileSummary{stable_mean(values), quantile_sorted(values, 0.1),
                         quantile_sorted(values, 0.9)};
}

LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("line fit needs at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("line fit needs distinct abscissae");
  const double slope = sxy / sxx;
  return LineFit{slope, my - slope * mx};
}

}  // namespace ensbfc
