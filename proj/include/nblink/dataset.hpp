#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nblink/link_model.hpp"
#include "nblink/mab_engine.hpp"
#include "nblink/simulator.hpp"
#include "nblink/tpp_gan/events.hpp"

namespace nblink {

/// Scheduling label plus the channel context it was taken in.
struct DatasetRecord {
  double t_ms = 0.0;
  Direction direction = Direction::uplink;
  int alpha = 0;
  double gamma = 0.0;   // normalized PRB count
  double m_norm = 0.0;  // normalized MCS
  double r_norm = 0.0;  // normalized repetition index
  double sinr_db = 0.0;
  double plr = 0.0;

  tpp::EventRecord event() const { return {t_ms, alpha, gamma, m_norm, r_norm}; }
  bool valid() const;
  bool operator==(const DatasetRecord&) const = default;
};

/// Record of one decision, marks normalized against the direction's sets.
DatasetRecord make_record(double t_ms, Direction dir, const LinkConfig& cfg, int max_prb,
                          double sinr_db, double plr);

struct DatasetOptions {
  std::size_t episodes = 1;
  int idle_every = 10;  // one unscheduled record per this many idle subframes
  SimConfig sim;
  ChannelModelParams channel;
  MabParams mab;
  std::uint64_t seed = 1;
};

/// Runs MAB-driven episodes with one persistent bandit and emits a record per
/// transmission start (PLR of the bandit window it belongs to) plus
/// subsampled idle records. Episode times restart at 0.
std::vector<DatasetRecord> generate_dataset(const DatasetOptions& opt);

std::vector<tpp::EventRecord> to_events(std::span<const DatasetRecord> records);

/// Mean PLR of scheduled records per 1 s bin, episode after episode, bins
/// without scheduled records skipped.
std::vector<double> plr_per_second(std::span<const DatasetRecord> records);

}  // namespace nblink
