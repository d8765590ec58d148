#include "nblink/link_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nblink {

char direction_code(Direction d) { return d == Direction::uplink ? 'U' : 'D'; }

Direction direction_from_code(char code) {
  switch (code) {
    case 'U': return Direction::uplink;
    case 'D': return Direction::downlink;
    default: throw std::invalid_argument(std::string("unknown direction code '") + code + "'");
  }
}

RepetitionSet::RepetitionSet(Direction d, int count) : direction_(d) {
  values_.reserve(count);
  for (int i = 0; i < count; ++i) values_.push_back(1 << i);
}

const RepetitionSet& RepetitionSet::uplink() {
  static const RepetitionSet set(Direction::uplink, 8);
  return set;
}

const RepetitionSet& RepetitionSet::downlink() {
  static const RepetitionSet set(Direction::downlink, 12);
  return set;
}

const RepetitionSet& RepetitionSet::for_direction(Direction d) {
  return d == Direction::uplink ? uplink() : downlink();
}

bool RepetitionSet::contains(int rep) const {
  return std::binary_search(values_.begin(), values_.end(), rep);
}

std::size_t RepetitionSet::index_of(int rep) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), rep);
  if (it == values_.end() || *it != rep) {
    throw std::domain_error("repetition count " + std::to_string(rep) +
                            " is not in the " +
                            (direction_ == Direction::uplink ? "uplink" : "downlink") + " set");
  }
  return static_cast<std::size_t>(it - values_.begin());
}

std::string to_string(const LinkConfig& cfg) {
  return "(mcs=" + std::to_string(cfg.mcs) + ", rep=" + std::to_string(cfg.repetitions) +
         ", prb=" + std::to_string(cfg.prb_count) + ")";
}

bool is_legal(const LinkConfig& cfg, const RepetitionSet& reps, int max_prb) {
  return cfg.mcs >= kMcsMin && cfg.mcs <= kMcsMax && reps.contains(cfg.repetitions) &&
         cfg.prb_count >= 1 && cfg.prb_count <= max_prb;
}

void ChannelModelParams::validate() const {
  if (!(steepness > 0.0) || !std::isfinite(steepness))
    throw std::invalid_argument("channel.steepness must be positive");
  if (!std::isfinite(t0_db)) throw std::invalid_argument("channel.t0_db must be finite");
  if (!std::isfinite(slope_db_per_mcs))
    throw std::invalid_argument("channel.slope_db_per_mcs must be finite");
  if (tbs_bits[0] <= 0) throw std::invalid_argument("channel.tbs_bits must be positive");
  for (int m = 1; m < kMcsLevels; ++m) {
    if (tbs_bits[m] <= tbs_bits[m - 1])
      throw std::invalid_argument("channel.tbs_bits must be strictly increasing in MCS");
  }
}

double normalize_mcs(int mcs) {
  if (mcs < kMcsMin || mcs > kMcsMax)
    throw std::domain_error("MCS level " + std::to_string(mcs) + " outside 0..12");
  return static_cast<double>(mcs - kMcsMin) / (kMcsMax - kMcsMin);
}

int denormalize_mcs(double x) {
  const double level = std::clamp(x, 0.0, 1.0) * (kMcsMax - kMcsMin) + kMcsMin;
  return static_cast<int>(std::lround(level));
}

double normalize_repetition(int rep, const RepetitionSet& set) {
  const auto idx = set.index_of(rep);
  return static_cast<double>(idx) / static_cast<double>(set.size() - 1);
}

int denormalize_repetition(double x, const RepetitionSet& set) {
  const double pos = std::clamp(x, 0.0, 1.0) * static_cast<double>(set.size() - 1);
  auto lower = static_cast<std::size_t>(std::floor(pos));
  if (lower >= set.size() - 1) return set.back();
  // Exact ties resolve to the lower index.
  if (pos - static_cast<double>(lower) > 0.5) ++lower;
  return set.values()[lower];
}

double normalize_prb(int prb, int max_prb) {
  if (max_prb < 1 || prb < 1 || prb > max_prb)
    throw std::domain_error("PRB count " + std::to_string(prb) + " outside 1.." +
                            std::to_string(max_prb));
  if (max_prb == 1) return 0.0;
  return static_cast<double>(prb - 1) / (max_prb - 1);
}

int denormalize_prb(double x, int max_prb) {
  if (max_prb <= 1) return 1;
  return static_cast<int>(std::lround(std::clamp(x, 0.0, 1.0) * (max_prb - 1))) + 1;
}

double effective_sinr(double sinr_db, int repetitions) {
  return sinr_db + 10.0 * std::log10(static_cast<double>(repetitions));
}

double success_probability(double sinr_eff_db, int mcs, const ChannelModelParams& params) {
  const double margin = sinr_eff_db - params.threshold_db(mcs);
  return 1.0 / (1.0 + std::exp(-params.steepness * margin));
}

std::int64_t subframes_needed(int packet_bits, const LinkConfig& cfg,
                              const ChannelModelParams& params) {
  const std::int64_t per_subframe =
      static_cast<std::int64_t>(params.tbs_bits[cfg.mcs]) * cfg.prb_count;
  const std::int64_t blocks = (packet_bits + per_subframe - 1) / per_subframe;
  return blocks * cfg.repetitions;
}

int highest_feasible_mcs(double sinr_db, const ChannelModelParams& params) {
  int best = kMcsMin;
  for (int m = kMcsMin; m <= kMcsMax; ++m) {
    if (params.threshold_db(m) <= sinr_db) best = m;
  }
  return best;
}

std::vector<LinkConfig> full_arm_space(const RepetitionSet& reps, int max_prb) {
  std::vector<LinkConfig> arms;
  arms.reserve(static_cast<std::size_t>(kMcsLevels) * reps.size() * max_prb);
  for (int m = kMcsMin; m <= kMcsMax; ++m)
    for (int r : reps.values())
      for (int p = 1; p <= max_prb; ++p) arms.push_back({m, r, p});
  return arms;
}

}  // namespace nblink
