#include "nblink/policies.hpp"

#include <algorithm>
#include <cmath>

namespace nblink {

LinkConfig threshold_config(double sinr_db, Direction dir, const ChannelModelParams& ch) {
  const RepetitionSet& reps = RepetitionSet::for_direction(dir);
  LinkConfig cfg{highest_feasible_mcs(sinr_db, ch), 1, 1};
  const double shortfall = ch.threshold_db(0) - sinr_db;
  if (shortfall > 0.0) {
    const double doublings = std::ceil(shortfall / 3.0);
    cfg.repetitions = doublings >= std::log2(static_cast<double>(reps.back()))
                          ? reps.back()
                          : 1 << static_cast<int>(doublings);
  }
  return cfg;
}

MabPolicy::MabPolicy(MabParams params, int max_prb, std::uint64_t seed)
    : params_(params),
      ul_(full_arm_space(RepetitionSet::uplink(), max_prb), params, substream_seed(seed, "mab", 0)),
      dl_(full_arm_space(RepetitionSet::downlink(), max_prb), params,
          substream_seed(seed, "mab", 1)) {}

void MabPolicy::close(Direction dir, Window& w, std::int64_t now_ms) {
  if (w.tx == 0) return;
  const double plr = static_cast<double>(w.lost) / static_cast<double>(w.tx);
  engine_for(dir).update(w.sinr_db, w.arm, plr, now_ms);
  if (on_window_) on_window_(w.tag, plr);
}

Decision MabPolicy::choose(const TxContext& ctx) {
  const Key key{ctx.ue, static_cast<int>(ctx.direction)};
  auto it = open_.find(key);
  if (it != open_.end() && ctx.now_ms - it->second.start_ms < params_.t_d_ms)
    return {it->second.arm, it->second.tag};
  if (it != open_.end()) {
    close(ctx.direction, it->second, ctx.now_ms);
    open_.erase(it);
  }
  Window w;
  w.arm = engine_for(ctx.direction).select_arm(ctx.sinr_db);
  w.sinr_db = ctx.sinr_db;
  w.start_ms = ctx.now_ms;
  w.tag = next_tag_++;
  open_.emplace(key, w);
  return {w.arm, w.tag};
}

void MabPolicy::on_outcome(const TxContext& ctx, const Decision& d, bool delivered,
                           std::int64_t) {
  auto it = open_.find({ctx.ue, static_cast<int>(ctx.direction)});
  if (it == open_.end() || it->second.tag != d.tag) return;
  ++it->second.tx;
  if (!delivered) ++it->second.lost;
}

void MabPolicy::finish(std::int64_t end_ms) {
  for (auto& [key, w] : open_) close(static_cast<Direction>(key.second), w, end_ms);
  open_.clear();
}

SmartConPolicy::SmartConPolicy(tpp::GanParamsd model, ChannelModelParams ch, SmartConOptions opt)
    : model_(std::move(model)), ch_(ch), opt_(std::move(opt)) {
  if (opt_.rho_ms < 1) throw std::invalid_argument("rho_ms must be >= 1");
  if (opt_.training_plr_per_s)
    monitor_.emplace(*opt_.training_plr_per_s, opt_.retrain, opt_.seed);
}

const std::vector<tpp::PredictedEvent>& SmartConPolicy::window(std::int64_t index) {
  if (index != cached_index_) {
    tpp::PredictOptions po;
    po.max_prb = opt_.max_prb;
    const double start = static_cast<double>(index * opt_.rho_ms);
    cached_ = tpp::predict_schedule(model_, start, start + static_cast<double>(opt_.rho_ms),
                                    substream_seed(opt_.seed, "gan", index), po);
    cached_index_ = index;
  }
  return cached_;
}

Decision SmartConPolicy::choose(const TxContext& ctx) {
  const auto& events = window(ctx.now_ms / opt_.rho_ms);
  const double now = static_cast<double>(ctx.now_ms);
  auto it = std::upper_bound(events.begin(), events.end(), now,
                             [](double t, const tpp::PredictedEvent& e) { return t < e.t_ms; });
  if (it != events.begin() && std::prev(it)->alpha == 1) {
    const auto& e = *std::prev(it);
    ++predicted_;
    return {tpp::denormalize_marks(e.record.gamma, e.record.m_norm, e.record.r_norm,
                                   ctx.direction, opt_.max_prb),
            static_cast<std::int64_t>(std::prev(it) - events.begin())};
  }
  ++fallback_;
  return {threshold_config(ctx.sinr_db, ctx.direction, ch_), -1};
}

void SmartConPolicy::on_outcome(const TxContext&, const Decision&, bool delivered,
                                std::int64_t done_ms) {
  if (monitor_) monitor_->on_outcome(done_ms, delivered);
}

}  // namespace nblink
