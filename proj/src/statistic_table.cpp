#include "nblink/statistic_table.hpp"

#include <cmath>
#include <stdexcept>

namespace nblink {

StatisticTable::StatisticTable(std::size_t capacity, double bucket_width_db)
    : capacity_(capacity), bucket_width_(bucket_width_db) {
  if (capacity_ == 0) throw std::invalid_argument("statistic table capacity must be positive");
  if (!(bucket_width_ > 0.0)) throw std::invalid_argument("bucket width must be positive");
}

std::int64_t StatisticTable::bucket_of(double sinr_db) const {
  return static_cast<std::int64_t>(std::floor(sinr_db / bucket_width_));
}

const StatEntry& StatisticTable::by_seq(std::uint64_t seq) const {
  return entries_[static_cast<std::size_t>(seq - front_seq_)];
}

void StatisticTable::push(const StatEntry& e) {
  if (entries_.size() == capacity_) {
    const StatEntry& old = entries_.front();
    const Key k{old.plr, front_seq_};
    auto it = buckets_.find(bucket_of(old.sinr_db));
    it->second.erase(k);
    if (it->second.empty()) buckets_.erase(it);
    global_.erase(k);
    entries_.pop_front();
    ++front_seq_;
  }
  const std::uint64_t seq = front_seq_ + entries_.size();
  entries_.push_back(e);
  const Key k{e.plr, seq};
  buckets_[bucket_of(e.sinr_db)].insert(k);
  global_.insert(k);
}

std::optional<StatEntry> StatisticTable::best_in_range(double lo_db, double hi_db) const {
  if (entries_.empty() || hi_db < lo_db) return std::nullopt;
  const std::int64_t b_lo = bucket_of(lo_db);
  const std::int64_t b_hi = bucket_of(hi_db);
  std::optional<Key> best;
  for (auto it = buckets_.lower_bound(b_lo); it != buckets_.end() && it->first <= b_hi; ++it) {
    const bool edge = it->first == b_lo || it->first == b_hi;
    for (const Key& k : it->second) {
      if (edge) {
        const double s = by_seq(k.seq).sinr_db;
        if (s < lo_db || s > hi_db) continue;
      }
      if (!best || k < *best) best = k;
      break;  // sets are ordered best-first
    }
  }
  if (!best) return std::nullopt;
  return by_seq(best->seq);
}

std::optional<StatEntry> StatisticTable::best_overall() const {
  if (global_.empty()) return std::nullopt;
  return by_seq(global_.begin()->seq);
}

}  // namespace nblink
