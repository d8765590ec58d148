#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nblink {

inline constexpr int kMcsMin = 0;
inline constexpr int kMcsMax = 12;
inline constexpr int kMcsLevels = kMcsMax - kMcsMin + 1;
inline constexpr int kDefaultMaxPrb = 6;

enum class Direction { uplink, downlink };

char direction_code(Direction d);        // 'U' / 'D'
Direction direction_from_code(char code);

/// Allowed repetition counts for one link direction, strictly increasing
/// powers of two.
class RepetitionSet {
 public:
  static const RepetitionSet& uplink();
  static const RepetitionSet& downlink();
  static const RepetitionSet& for_direction(Direction d);

  Direction direction() const { return direction_; }
  std::span<const int> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  int front() const { return values_.front(); }
  int back() const { return values_.back(); }
  bool contains(int rep) const;
  /// Throws std::domain_error when rep is not a member.
  std::size_t index_of(int rep) const;

 private:
  RepetitionSet(Direction d, int count);
  Direction direction_;
  std::vector<int> values_;
};

/// One MCS-repetition-PRB arm.
struct LinkConfig {
  int mcs = 0;
  int repetitions = 1;
  int prb_count = 1;

  auto operator<=>(const LinkConfig&) const = default;
};

std::string to_string(const LinkConfig& cfg);

bool is_legal(const LinkConfig& cfg, const RepetitionSet& reps, int max_prb);

struct ChannelModelParams {
  double t0_db = -2.0;
  double slope_db_per_mcs = 1.8;
  double steepness = 1.0;  // 1/dB
  std::array<int, kMcsLevels> tbs_bits = default_tbs();

  static constexpr std::array<int, kMcsLevels> default_tbs() {
    std::array<int, kMcsLevels> t{};
    for (int m = 0; m < kMcsLevels; ++m) t[m] = 16 * (m + 1);
    return t;
  }

  /// SINR at which delivery succeeds with probability one half.
  double threshold_db(int mcs) const { return t0_db + slope_db_per_mcs * mcs; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

double normalize_mcs(int mcs);
int denormalize_mcs(double x);

double normalize_repetition(int rep, const RepetitionSet& set);
/// Nearest set index, ties toward the lower index.
int denormalize_repetition(double x, const RepetitionSet& set);

/// (prb - 1) / (u - 1); a single-PRB space maps to 0.
double normalize_prb(int prb, int max_prb);
int denormalize_prb(double x, int max_prb);

/// Ideal combining gain of repeated transmissions.
double effective_sinr(double sinr_db, int repetitions);

double success_probability(double sinr_eff_db, int mcs, const ChannelModelParams& params);

std::int64_t subframes_needed(int packet_bits, const LinkConfig& cfg,
                              const ChannelModelParams& params);

/// Highest MCS whose threshold does not exceed sinr_db, or MCS 0 when none does.
int highest_feasible_mcs(double sinr_db, const ChannelModelParams& params);

/// Every legal arm for the direction, ordered by (mcs, repetitions, prb).
std::vector<LinkConfig> full_arm_space(const RepetitionSet& reps, int max_prb);

}  // namespace nblink
