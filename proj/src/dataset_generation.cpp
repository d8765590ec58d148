#include "nblink/dataset.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "nblink/policies.hpp"

namespace nblink {

bool DatasetRecord::valid() const {
  if (!event().valid()) return false;
  return std::isfinite(sinr_db) && std::isfinite(plr) && plr >= 0.0 && plr <= 1.0;
}

DatasetRecord make_record(double t_ms, Direction dir, const LinkConfig& cfg, int max_prb,
                          double sinr_db, double plr) {
  DatasetRecord r;
  r.t_ms = t_ms;
  r.direction = dir;
  r.alpha = 1;
  r.gamma = normalize_prb(cfg.prb_count, max_prb);
  r.m_norm = normalize_mcs(cfg.mcs);
  r.r_norm = normalize_repetition(cfg.repetitions, RepetitionSet::for_direction(dir));
  r.sinr_db = sinr_db;
  r.plr = plr;
  return r;
}

namespace {

class Recorder : public SimObserver {
 public:
  Recorder(int max_prb, int idle_every) : max_prb_(max_prb), idle_every_(idle_every) {}

  void on_transmission(const TxRecord& tx) override {
    pending_[tx.decision.tag].push_back(records_.size());
    records_.push_back(make_record(static_cast<double>(tx.start_ms), tx.direction,
                                   tx.decision.config, max_prb_, tx.sinr_db, NAN));
  }

  void on_idle(std::int64_t t_ms, double mean_sinr_db, double cumulative_plr) override {
    if (++idle_count_ % idle_every_ != 0) return;
    DatasetRecord r;
    r.t_ms = static_cast<double>(t_ms);
    r.sinr_db = mean_sinr_db;
    r.plr = cumulative_plr;
    records_.push_back(r);
  }

  void window_closed(std::int64_t tag, double plr) {
    auto it = pending_.find(tag);
    if (it == pending_.end()) return;
    for (std::size_t i : it->second) records_[i].plr = plr;
    pending_.erase(it);
  }

  // Records of windows that never resolved take the episode PLR.
  std::vector<DatasetRecord> take(double episode_plr) {
    for (auto& r : records_)
      if (std::isnan(r.plr)) r.plr = episode_plr;
    pending_.clear();
    idle_count_ = 0;
    return std::move(records_);
  }

 private:
  int max_prb_;
  int idle_every_;
  std::uint64_t idle_count_ = 0;
  std::vector<DatasetRecord> records_;
  std::map<std::int64_t, std::vector<std::size_t>> pending_;
};

}  // namespace

std::vector<DatasetRecord> generate_dataset(const DatasetOptions& opt) {
  if (opt.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (opt.idle_every < 1) throw std::invalid_argument("idle_every must be >= 1");
  opt.mab.validate();
  SimConfig sim = opt.sim;
  sim.seed = opt.seed;
  MabPolicy policy(opt.mab, sim.max_prb, opt.seed);
  Recorder rec(sim.max_prb, opt.idle_every);
  policy.set_window_callback([&](std::int64_t tag, double plr) { rec.window_closed(tag, plr); });

  std::vector<DatasetRecord> out;
  for (std::size_t ep = 0; ep < opt.episodes; ++ep) {
    MetricsReport m;
    try {
      m = simulate(policy, sim, opt.channel, &rec, ep);
    } catch (const std::exception& e) {
      throw std::runtime_error("episode " + std::to_string(ep) + " failed: " + e.what());
    }
    auto part = rec.take(m.avg_plr);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<tpp::EventRecord> to_events(std::span<const DatasetRecord> records) {
  std::vector<tpp::EventRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.event());
  return out;
}

std::vector<double> plr_per_second(std::span<const DatasetRecord> records) {
  std::vector<double> out;
  double sum = 0.0;
  std::size_t n = 0;
  std::int64_t bin = -1;
  double prev_t = -INFINITY;
  auto flush = [&] {
    if (n > 0) out.push_back(sum / static_cast<double>(n));
    sum = 0.0;
    n = 0;
  };
  for (const auto& r : records) {
    const auto b = static_cast<std::int64_t>(std::floor(r.t_ms / 1000.0));
    if (b != bin || !(r.t_ms > prev_t)) {
      flush();
      bin = b;
    }
    prev_t = r.t_ms;
    if (r.alpha == 1) {
      sum += r.plr;
      ++n;
    }
  }
  flush();
  return out;
}

}  // namespace nblink
