#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nblink/link_model.hpp"
#include "nblink/rng.hpp"
#include "nblink/statistic_table.hpp"

namespace nblink {

struct MabParams {
  int c = 5;
  double d = 0.1;
  std::size_t big_k = 0;  // 0: take the size of the arm space
  double delta_db = 1.0;
  int t_d_ms = 100;
  double plr_floor = 1e-3;
  std::size_t table_capacity = 100'000;

  void validate() const;
};

/// Exploration probability min(1, cK / (d^2 t)); t is the 1-based play index.
double epsilon(std::uint64_t t, const MabParams& p);

/// Inverse PLR, capped by the PLR floor.
double reward(double plr, const MabParams& p);

/// Exploitation rule: minimum-PLR arm among entries within +-delta of the
/// present SINR, else the global minimum. Empty table gives nullopt.
std::optional<LinkConfig> exploit_arm(double sinr_db, const StatisticTable& table,
                                      const MabParams& p);

/// One epsilon-greedy decision for play t. Exploits when a uniform draw
/// exceeds epsilon(t); an empty table always explores.
LinkConfig select_arm(double sinr_db, std::uint64_t t, const StatisticTable& table,
                      const MabParams& p, std::span<const LinkConfig> arms, Rng& rng);

class MabEngine {
 public:
  MabEngine(std::vector<LinkConfig> arms, MabParams params, std::uint64_t seed);

  /// Advances the play counter and returns the chosen arm.
  LinkConfig select_arm(double sinr_db);
  void update(double sinr_db, const LinkConfig& arm, double plr, std::int64_t timestamp_ms = 0);

  std::optional<LinkConfig> exploit(double sinr_db) const {
    return exploit_arm(sinr_db, table_, params_);
  }

  std::uint64_t plays() const { return plays_; }
  double current_epsilon() const { return epsilon(plays_ == 0 ? 1 : plays_, params_); }
  const MabParams& params() const { return params_; }
  const StatisticTable& table() const { return table_; }
  std::span<const LinkConfig> arms() const { return arms_; }

 private:
  std::vector<LinkConfig> arms_;
  MabParams params_;
  StatisticTable table_;
  Rng rng_;
  std::uint64_t plays_ = 0;
};

}  // namespace nblink
