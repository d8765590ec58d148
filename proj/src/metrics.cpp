#include "nblink/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nblink {

MapeResult mape(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size())
    throw std::invalid_argument("mape: series lengths differ");
  MapeResult r;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) {
      ++r.excluded_zeros;
      continue;
    }
    sum += std::abs(actual[i] - predicted[i]) / std::abs(actual[i]);
    ++n;
  }
  if (n > 0) r.percent = 100.0 * sum / static_cast<double>(n);
  return r;
}

std::optional<double> mape_avg(std::span<const MapeResult> per_quantity) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& q : per_quantity) {
    if (!q.percent) continue;
    sum += *q.percent;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("empirical CDF of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("quantile level must be in [0, 1]");
  const double pos = q * static_cast<double>(sorted_.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted_.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_[lo] + frac * (sorted_[hi] - sorted_[lo]);
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

}  // namespace nblink
