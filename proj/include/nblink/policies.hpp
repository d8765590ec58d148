#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nblink/mab_engine.hpp"
#include "nblink/retrain.hpp"
#include "nblink/simulator.hpp"
#include "nblink/tpp_gan/predict.hpp"

namespace nblink {

inline constexpr LinkConfig kStaticConfig{6, 1, 1};

/// Highest MCS whose threshold is met; below T(0) the repetitions double per
/// 3 dB of shortfall, capped at the largest allowed count. One PRB.
LinkConfig threshold_config(double sinr_db, Direction dir, const ChannelModelParams& ch);

class StaticFifoPolicy : public Policy {
 public:
  std::string name() const override { return "static"; }
  bool fifo_order() const override { return true; }
  Decision choose(const TxContext&) override { return {kStaticConfig, -1}; }
};

class ThresholdPolicy : public Policy {
 public:
  explicit ThresholdPolicy(ChannelModelParams ch = {}) : ch_(ch) {}
  std::string name() const override { return "threshold"; }
  Decision choose(const TxContext& ctx) override {
    return {threshold_config(ctx.sinr_db, ctx.direction, ch_), -1};
  }

 private:
  ChannelModelParams ch_;
};

/// One bandit per link direction. An arm chosen for a (UE, direction) pair
/// stays in force for t_d; the window's PLR is fed back when it closes,
/// which happens at the next decision after t_d or when the run ends.
class MabPolicy : public Policy {
 public:
  using WindowCallback = std::function<void(std::int64_t tag, double plr)>;

  MabPolicy(MabParams params, int max_prb, std::uint64_t seed);

  std::string name() const override { return "mab"; }
  Decision choose(const TxContext& ctx) override;
  void on_outcome(const TxContext& ctx, const Decision& d, bool delivered,
                  std::int64_t done_ms) override;
  void finish(std::int64_t end_ms) override;

  void set_window_callback(WindowCallback cb) { on_window_ = std::move(cb); }
  const MabEngine& engine(Direction d) const { return d == Direction::uplink ? ul_ : dl_; }

 private:
  struct Window {
    LinkConfig arm;
    double sinr_db = 0.0;
    std::int64_t start_ms = 0;
    std::int64_t tag = 0;
    std::uint64_t tx = 0;
    std::uint64_t lost = 0;
  };
  using Key = std::pair<int, int>;

  void close(Direction dir, Window& w, std::int64_t now_ms);
  MabEngine& engine_for(Direction d) { return d == Direction::uplink ? ul_ : dl_; }

  MabParams params_;
  MabEngine ul_;
  MabEngine dl_;
  std::map<Key, Window> open_;
  std::int64_t next_tag_ = 0;
  WindowCallback on_window_;
};

struct SmartConOptions {
  std::int64_t rho_ms = 60'000;  // prediction and retrain window
  int max_prb = kDefaultMaxPrb;
  std::uint64_t seed = 1;
  std::optional<std::vector<double>> training_plr_per_s;  // enables the monitor
  RetrainOptions retrain;
};

/// Applies generated schedules: each generated event governs the subframes
/// up to the next one. Scheduled events supply (MCS, repetitions, PRB);
/// unscheduled ones, and time before the first event of a window, fall back
/// to the threshold rule.
class SmartConPolicy : public Policy {
 public:
  SmartConPolicy(tpp::GanParamsd model, ChannelModelParams ch, SmartConOptions opt);

  std::string name() const override { return "smartcon"; }
  Decision choose(const TxContext& ctx) override;
  void on_outcome(const TxContext& ctx, const Decision& d, bool delivered,
                  std::int64_t done_ms) override;
  std::uint64_t retrain_signals() const override { return monitor_ ? monitor_->signals() : 0; }

  std::uint64_t predicted_decisions() const { return predicted_; }
  std::uint64_t fallback_decisions() const { return fallback_; }

 private:
  const std::vector<tpp::PredictedEvent>& window(std::int64_t index);

  tpp::GanParamsd model_;
  ChannelModelParams ch_;
  SmartConOptions opt_;
  std::int64_t cached_index_ = -1;
  std::vector<tpp::PredictedEvent> cached_;
  std::optional<RetrainMonitor> monitor_;
  std::uint64_t predicted_ = 0;
  std::uint64_t fallback_ = 0;
};

}  // namespace nblink
