#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "nblink/rng.hpp"

namespace nblink {

/// Pearson correlation; absent for fewer than 2 points or zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// True when the correlation falls below threshold. Zero variance in either
/// series is no evidence of drift and gives false.
bool should_retrain(std::span<const double> recent_plr, std::span<const double> training_plr,
                    double threshold = 0.3);

struct RetrainOptions {
  std::int64_t rho_ms = 60'000;
  double correlation_threshold = 0.3;
  std::size_t record_threshold = 100'000;
};

/// Watches delivery outcomes and flags drift away from the training data.
///
/// On each loss the per-second PLR over the last rho is correlated with an
/// equally long window of the training PLR series at a uniformly drawn
/// offset. At most one signal is raised per rho.
class RetrainMonitor {
 public:
  RetrainMonitor(std::vector<double> training_plr_per_s, RetrainOptions opt, std::uint64_t seed);

  void on_outcome(std::int64_t t_ms, bool delivered);

  std::uint64_t signals() const { return signals_; }
  std::size_t observed() const { return observed_; }
  /// A signal has been raised and enough fresh records exist to retrain on.
  bool retrain_due() const { return signals_ > 0 && observed_ >= opt_.record_threshold; }

 private:
  struct Bin {
    std::int64_t second = 0;
    std::uint64_t total = 0;
    std::uint64_t lost = 0;
  };

  std::vector<double> training_;
  RetrainOptions opt_;
  Rng rng_;
  std::deque<Bin> bins_;
  std::optional<std::int64_t> last_signal_ms_;
  std::uint64_t signals_ = 0;
  std::size_t observed_ = 0;
};

}  // namespace nblink
