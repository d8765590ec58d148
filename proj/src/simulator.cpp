#include "nblink/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace nblink {

void SimConfig::validate() const {
  auto fail = [](const char* key, const char* what) {
    throw std::invalid_argument("sim." + std::string(key) + " " + what);
  };
  if (n_ues < 1) fail("n_ues", "must be >= 1");
  if (duration_ms < 1) fail("duration_ms", "must be >= 1");
  if (!(sinr_low_db < sinr_high_db)) fail("sinr_low_db", "must be below sim.sinr_high_db");
  if (!(sinr_step_db >= 0.0)) fail("sinr_step_db", "must be >= 0");
  if (initial_sinr_db && !std::isfinite(*initial_sinr_db))
    fail("initial_sinr_db", "must be finite");
  if (packet_bits < 1) fail("packet_bits", "must be >= 1");
  if (!(arrival_rate_per_ue >= 0.0)) fail("arrival_rate_per_ue", "must be >= 0");
  if (!(ul_fraction >= 0.0 && ul_fraction <= 1.0)) fail("ul_fraction", "must be in [0, 1]");
  if (!(tcp_fraction >= 0.0 && tcp_fraction <= 1.0)) fail("tcp_fraction", "must be in [0, 1]");
  if (max_prb < 1) fail("max_prb", "must be >= 1");
  if (ewma_horizon_sf < 1) fail("ewma_horizon_sf", "must be >= 1");
}

double channel_step(double sinr_db, Rng& rng, const SimConfig& cfg) {
  if (cfg.sinr_step_db == 0.0) return sinr_db;
  std::normal_distribution<double> step(0.0, cfg.sinr_step_db);
  return std::clamp(sinr_db + step(rng), cfg.sinr_low_db, cfg.sinr_high_db);
}

double pf_metric(const UeState& ue, const ChannelModelParams& ch) {
  const double rate = ch.tbs_bits[highest_feasible_mcs(ue.sinr_db, ch)] * 1000.0;
  return rate / ue.ewma_rate_bps;
}

std::optional<int> proportional_fair_select(std::span<const UeState> ues,
                                            const ChannelModelParams& ch) {
  std::optional<int> best;
  double best_metric = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ues.size(); ++i) {
    if (ues[i].queue.empty()) continue;
    const double m = pf_metric(ues[i], ch);
    if (m > best_metric || (m == best_metric && ues[i].id < ues[*best].id)) {
      best_metric = m;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::optional<int> fifo_select(std::span<const UeState> ues) {
  std::optional<int> best;
  for (std::size_t i = 0; i < ues.size(); ++i) {
    if (ues[i].queue.empty()) continue;
    if (!best) {
      best = static_cast<int>(i);
      continue;
    }
    const auto& a = ues[i].queue.front();
    const auto& b = ues[*best].queue.front();
    if (a.arrival_ms < b.arrival_ms || (a.arrival_ms == b.arrival_ms && ues[i].id < ues[*best].id))
      best = static_cast<int>(i);
  }
  return best;
}

TxOutcome transmit(int packet_bits, const LinkConfig& cfg, double sinr_db, Rng& rng,
                   const ChannelModelParams& ch) {
  TxOutcome out;
  out.subframes = subframes_needed(packet_bits, cfg, ch);
  const double p = success_probability(effective_sinr(sinr_db, cfg.repetitions), cfg.mcs, ch);
  out.delivered = uniform01(rng) < p;
  return out;
}

namespace {

struct InFlight {
  int ue = 0;
  Packet packet;
  TxContext ctx;
  Decision decision;
  TxOutcome outcome;
  std::int64_t start_ms = 0;
  std::int64_t done_ms = 0;
  double serve_rate_bps = 0.0;
};

class TrafficSource {
 public:
  TrafficSource(const SimConfig& cfg, Rng& rng) : cfg_(cfg), rng_(rng) {
    next_.resize(cfg.n_ues);
    for (auto& t : next_) t = draw_gap();
  }

  // Moves every arrival with time <= t_ms into the queues.
  std::uint64_t deliver(std::vector<UeState>& ues, std::int64_t t_ms) {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < ues.size(); ++i) {
      while (next_[i] <= static_cast<double>(t_ms)) {
        Packet p;
        p.id = next_id_++;
        p.arrival_ms = next_[i];
        p.direction = uniform01(rng_) < cfg_.ul_fraction ? Direction::uplink : Direction::downlink;
        p.retransmittable = uniform01(rng_) < cfg_.tcp_fraction;
        ues[i].queue.push_back(p);
        ++n;
        next_[i] += draw_gap();
      }
    }
    return n;
  }

 private:
  double draw_gap() {
    if (cfg_.arrival_rate_per_ue <= 0.0) return std::numeric_limits<double>::infinity();
    std::exponential_distribution<double> gap(cfg_.arrival_rate_per_ue / 1000.0);
    return gap(rng_);
  }

  const SimConfig& cfg_;
  Rng& rng_;
  std::vector<double> next_;
  std::uint64_t next_id_ = 0;
};

}  // namespace

MetricsReport simulate(Policy& policy, const SimConfig& cfg, const ChannelModelParams& ch,
                       SimObserver* observer, std::uint64_t stream_index) {
  cfg.validate();
  ch.validate();
  Rng channel_rng = make_rng(cfg.seed, "channel", stream_index);
  Rng traffic_rng = make_rng(cfg.seed, "traffic", stream_index);
  Rng link_rng = make_rng(cfg.seed, "link", stream_index);

  std::vector<UeState> ues(cfg.n_ues);
  std::uniform_real_distribution<double> init(cfg.sinr_low_db, cfg.sinr_high_db);
  for (int i = 0; i < cfg.n_ues; ++i) {
    ues[i].id = i;
    ues[i].sinr_db = cfg.initial_sinr_db ? *cfg.initial_sinr_db : init(channel_rng);
  }
  TrafficSource traffic(cfg, traffic_rng);

  MetricsReport rep;
  rep.policy = policy.name();
  rep.n_ues = cfg.n_ues;
  rep.seed = cfg.seed;
  std::optional<InFlight> busy;
  std::vector<double> delays;
  const double ewma_keep = 1.0 - 1.0 / cfg.ewma_horizon_sf;
  const double ewma_gain = 1.0 / cfg.ewma_horizon_sf;

  for (std::int64_t t = 0; t < cfg.duration_ms; ++t) {
    if (t > 0)
      for (auto& ue : ues) ue.sinr_db = channel_step(ue.sinr_db, channel_rng, cfg);
    rep.generated += traffic.deliver(ues, t);

    if (busy && busy->done_ms == t) {
      auto& f = *busy;
      policy.on_outcome(f.ctx, f.decision, f.outcome.delivered, t);
      if (f.outcome.delivered) {
        ++rep.delivered;
        delays.push_back(static_cast<double>(f.done_ms) - f.packet.arrival_ms);
      } else if (f.packet.retransmittable && f.packet.attempts < 2) {
        ues[f.ue].queue.push_front(f.packet);
      } else {
        ++rep.lost;
      }
      busy.reset();
    }

    if (!busy) {
      const auto pick = policy.fifo_order() ? fifo_select(ues) : proportional_fair_select(ues, ch);
      if (pick) {
        UeState& ue = ues[*pick];
        InFlight f;
        f.ue = *pick;
        f.packet = ue.queue.front();
        ue.queue.pop_front();
        ++f.packet.attempts;
        f.ctx = {ue.id, f.packet.direction, ue.sinr_db, t};
        f.decision = policy.choose(f.ctx);
        if (!is_legal(f.decision.config, RepetitionSet::for_direction(f.packet.direction),
                      cfg.max_prb))
          throw std::logic_error("policy " + policy.name() + " chose illegal config " +
                                 to_string(f.decision.config));
        f.outcome = transmit(cfg.packet_bits, f.decision.config, ue.sinr_db, link_rng, ch);
        f.start_ms = t;
        f.done_ms = t + f.outcome.subframes;
        f.serve_rate_bps = cfg.packet_bits * 1000.0 / static_cast<double>(f.outcome.subframes);
        rep.consumed_subframes += f.outcome.subframes;
        ++rep.transmissions;
        if (observer)
          observer->on_transmission({t, ue.id, f.packet.direction, ue.sinr_db, f.decision,
                                     f.outcome});
        busy = std::move(f);
      } else if (observer) {
        double mean_sinr = 0.0;
        for (const auto& u : ues) mean_sinr += u.sinr_db;
        mean_sinr /= static_cast<double>(ues.size());
        const auto done = rep.delivered + rep.lost;
        observer->on_idle(t, mean_sinr,
                          done ? static_cast<double>(rep.lost) / static_cast<double>(done) : 0.0);
      }
    }

    for (std::size_t i = 0; i < ues.size(); ++i) {
      const double served = busy && busy->ue == static_cast<int>(i) ? busy->serve_rate_bps : 0.0;
      ues[i].ewma_rate_bps = std::max(1.0, ewma_keep * ues[i].ewma_rate_bps + ewma_gain * served);
    }
  }
  policy.finish(cfg.duration_ms);

  for (const auto& ue : ues) rep.queued += ue.queue.size();
  if (busy) ++rep.queued;
  const auto done = rep.delivered + rep.lost;
  rep.avg_plr = done ? static_cast<double>(rep.lost) / static_cast<double>(done) : 0.0;
  rep.throughput_bps = static_cast<double>(rep.delivered) * cfg.packet_bits /
                       (static_cast<double>(cfg.duration_ms) / 1000.0);
  std::sort(delays.begin(), delays.end());
  if (!delays.empty())
    rep.avg_delay_ms =
        std::accumulate(delays.begin(), delays.end(), 0.0) / static_cast<double>(delays.size());
  rep.delay_cdf = std::move(delays);
  rep.retrain_signals = policy.retrain_signals();
  return rep;
}

}  // namespace nblink
