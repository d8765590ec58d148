#include "nblink/mab_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nblink {

void MabParams::validate() const {
  if (c < 1) throw std::invalid_argument("mab.c must be >= 1");
  if (!(d > 0.0)) throw std::invalid_argument("mab.d must be positive");
  if (!(delta_db > 0.0)) throw std::invalid_argument("mab.delta_db must be positive");
  if (t_d_ms < 1) throw std::invalid_argument("mab.t_d_ms must be >= 1");
  if (!(plr_floor > 0.0) || plr_floor > 1.0)
    throw std::invalid_argument("mab.plr_floor must be in (0, 1]");
  if (table_capacity < 1) throw std::invalid_argument("mab.table_capacity must be >= 1");
}

double epsilon(std::uint64_t t, const MabParams& p) {
  if (t == 0) throw std::domain_error("epsilon: play index starts at 1");
  const double k = static_cast<double>(p.big_k);
  return std::min(1.0, p.c * k / (p.d * p.d * static_cast<double>(t)));
}

double reward(double plr, const MabParams& p) { return 1.0 / std::max(plr, p.plr_floor); }

std::optional<LinkConfig> exploit_arm(double sinr_db, const StatisticTable& table,
                                      const MabParams& p) {
  if (auto local = table.best_in_range(sinr_db - p.delta_db, sinr_db + p.delta_db))
    return local->arm;
  if (auto global = table.best_overall()) return global->arm;
  return std::nullopt;
}

LinkConfig select_arm(double sinr_db, std::uint64_t t, const StatisticTable& table,
                      const MabParams& p, std::span<const LinkConfig> arms, Rng& rng) {
  if (arms.empty()) throw std::invalid_argument("select_arm: empty arm space");
  MabParams q = p;
  if (q.big_k == 0) q.big_k = arms.size();
  const double zeta = uniform01(rng);
  if (!table.empty() && zeta > epsilon(t, q)) return *exploit_arm(sinr_db, table, p);
  std::uniform_int_distribution<std::size_t> pick(0, arms.size() - 1);
  return arms[pick(rng)];
}

MabEngine::MabEngine(std::vector<LinkConfig> arms, MabParams params, std::uint64_t seed)
    : arms_(std::move(arms)),
      params_(params),
      table_(params.table_capacity, params.delta_db / 4.0),
      rng_(seed) {
  if (arms_.empty()) throw std::invalid_argument("MabEngine: empty arm space");
  if (params_.big_k == 0) params_.big_k = arms_.size();
  params_.validate();
}

LinkConfig MabEngine::select_arm(double sinr_db) {
  ++plays_;
  return nblink::select_arm(sinr_db, plays_, table_, params_, arms_, rng_);
}

void MabEngine::update(double sinr_db, const LinkConfig& arm, double plr,
                       std::int64_t timestamp_ms) {
  if (!(plr >= 0.0 && plr <= 1.0)) throw std::domain_error("update: PLR outside [0, 1]");
  table_.push({sinr_db, arm, plr, timestamp_ms});
}

}  // namespace nblink
