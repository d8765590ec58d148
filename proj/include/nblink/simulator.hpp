#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nblink/link_model.hpp"
#include "nblink/rng.hpp"

namespace nblink {

struct SimConfig {
  int n_ues = 10;
  std::int64_t duration_ms = 200'000;
  double sinr_low_db = 5.0;
  double sinr_high_db = 25.0;
  double sinr_step_db = 0.5;              // std of the per-subframe walk
  std::optional<double> initial_sinr_db;  // default: uniform in the range
  int packet_bits = 800;
  double arrival_rate_per_ue = 2.0;  // packets/s
  double ul_fraction = 0.5;
  double tcp_fraction = 0.2;  // packets allowed one retransmission
  int max_prb = kDefaultMaxPrb;
  int ewma_horizon_sf = 100;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct Packet {
  std::uint64_t id = 0;
  double arrival_ms = 0.0;
  Direction direction = Direction::uplink;
  bool retransmittable = false;
  int attempts = 0;
};

struct UeState {
  int id = 0;
  std::deque<Packet> queue;
  double ewma_rate_bps = 1.0;
  double sinr_db = 0.0;
};

struct MetricsReport {
  std::string policy;
  int n_ues = 0;
  std::uint64_t seed = 0;
  double throughput_bps = 0.0;
  double avg_plr = 0.0;
  double avg_delay_ms = 0.0;
  std::vector<double> delay_cdf;  // sorted delays of delivered packets
  std::int64_t consumed_subframes = 0;
  std::optional<double> mape_avg;

  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t lost = 0;
  std::uint64_t queued = 0;  // still waiting or in flight at the end
  std::uint64_t transmissions = 0;
  std::uint64_t retrain_signals = 0;

  bool operator==(const MetricsReport&) const = default;
};

/// Bounded Gaussian random walk of the channel.
double channel_step(double sinr_db, Rng& rng, const SimConfig& cfg);

/// PF metric: per-subframe rate of the best feasible MCS over the served
/// rate average.
double pf_metric(const UeState& ue, const ChannelModelParams& ch);

/// Backlogged UE with the highest PF metric, lowest id on ties.
std::optional<int> proportional_fair_select(std::span<const UeState> ues,
                                            const ChannelModelParams& ch);

/// Backlogged UE whose head-of-line packet arrived first, lowest id on ties.
std::optional<int> fifo_select(std::span<const UeState> ues);

struct TxOutcome {
  bool delivered = false;
  std::int64_t subframes = 0;
};

/// One Bernoulli delivery draw after repetition combining; resources are
/// spent whether or not the packet gets through.
TxOutcome transmit(int packet_bits, const LinkConfig& cfg, double sinr_db, Rng& rng,
                   const ChannelModelParams& ch);

struct TxContext {
  int ue = 0;
  Direction direction = Direction::uplink;
  double sinr_db = 0.0;
  std::int64_t now_ms = 0;
};

struct Decision {
  LinkConfig config;
  std::int64_t tag = -1;  // policy-defined, echoed to observers
};

/// Per-transmission configuration plug-in.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  /// FIFO service order instead of proportional fairness.
  virtual bool fifo_order() const { return false; }
  virtual Decision choose(const TxContext& ctx) = 0;
  /// Called when a transmission resolves.
  virtual void on_outcome(const TxContext&, const Decision&, bool /*delivered*/,
                          std::int64_t /*done_ms*/) {}
  /// Called once when the run ends.
  virtual void finish(std::int64_t /*end_ms*/) {}
  virtual std::uint64_t retrain_signals() const { return 0; }
};

struct TxRecord {
  std::int64_t start_ms = 0;
  int ue = 0;
  Direction direction = Direction::uplink;
  double sinr_db = 0.0;
  Decision decision;
  TxOutcome outcome;
};

class SimObserver {
 public:
  virtual ~SimObserver() = default;
  virtual void on_transmission(const TxRecord&) {}
  /// Subframe with an empty channel and no backlog.
  virtual void on_idle(std::int64_t /*t_ms*/, double /*mean_sinr_db*/,
                       double /*cumulative_plr*/) {}
};

/// Subframe loop; all randomness comes from cfg.seed substreams and the
/// stream index (episode) so repeated runs are identical.
MetricsReport simulate(Policy& policy, const SimConfig& cfg, const ChannelModelParams& ch,
                       SimObserver* observer = nullptr, std::uint64_t stream_index = 0);

}  // namespace nblink
