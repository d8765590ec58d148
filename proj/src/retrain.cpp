#include "nblink/retrain.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nblink {

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: series lengths differ");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

bool should_retrain(std::span<const double> recent_plr, std::span<const double> training_plr,
                    double threshold) {
  const auto r = pearson(recent_plr, training_plr);
  return r && *r < threshold;
}

RetrainMonitor::RetrainMonitor(std::vector<double> training_plr_per_s, RetrainOptions opt,
                               std::uint64_t seed)
    : training_(std::move(training_plr_per_s)), opt_(opt), rng_(make_rng(seed, "retrain")) {
  if (opt_.rho_ms < 1000) throw std::invalid_argument("retrain.rho_ms must be >= 1000");
}

void RetrainMonitor::on_outcome(std::int64_t t_ms, bool delivered) {
  ++observed_;
  const std::int64_t second = t_ms / 1000;
  if (bins_.empty() || bins_.back().second != second) bins_.push_back({second, 0, 0});
  ++bins_.back().total;
  if (!delivered) ++bins_.back().lost;
  const std::int64_t oldest = second - opt_.rho_ms / 1000 + 1;
  while (!bins_.empty() && bins_.front().second < oldest) bins_.pop_front();

  if (delivered) return;
  if (last_signal_ms_ && t_ms - *last_signal_ms_ < opt_.rho_ms) return;
  if (bins_.size() < 2 || training_.size() < bins_.size()) return;

  std::vector<double> recent;
  recent.reserve(bins_.size());
  for (const auto& b : bins_)
    recent.push_back(static_cast<double>(b.lost) / static_cast<double>(b.total));
  std::uniform_int_distribution<std::size_t> off(0, training_.size() - recent.size());
  const std::size_t o = off(rng_);
  if (should_retrain(recent, std::span(training_).subspan(o, recent.size()),
                     opt_.correlation_threshold)) {
    ++signals_;
    last_signal_ms_ = t_ms;
  }
}

}  // namespace nblink
