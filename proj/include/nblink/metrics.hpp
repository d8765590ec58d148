#pragma once

#include <optional>
#include <span>
#include <vector>

namespace nblink {

struct MapeResult {
  std::optional<double> percent;  // absent when every actual value is zero
  std::size_t excluded_zeros = 0;
};

/// 100 * mean(|a - p| / |a|) over the nonzero actual values.
MapeResult mape(std::span<const double> actual, std::span<const double> predicted);

/// Mean of the defined per-quantity MAPEs; absent when none is defined.
std::optional<double> mape_avg(std::span<const MapeResult> per_quantity);

class EmpiricalCdf {
 public:
  /// Throws std::invalid_argument on an empty sample.
  explicit EmpiricalCdf(std::vector<double> samples);

  std::span<const double> sorted() const { return sorted_; }
  /// Linear interpolation between order statistics at position q * (n - 1).
  double quantile(double q) const;
  /// Fraction of samples <= x.
  double operator()(double x) const;

 private:
  std::vector<double> sorted_;
};

}  // namespace nblink
