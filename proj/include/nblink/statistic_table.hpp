#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>

#include "nblink/link_model.hpp"

namespace nblink {

/// One observation: the arm applied at a given SINR and the PLR measured
/// over the following observation window.
struct StatEntry {
  double sinr_db = 0.0;
  LinkConfig arm{};
  double plr = 0.0;
  std::int64_t timestamp_ms = 0;
};

/// Append-only experience table bounded as a ring buffer.
///
/// Entries are indexed by SINR bucket so that the minimum-PLR query over an
/// SINR window costs a handful of ordered-set lookups instead of a scan.
/// Ties on PLR resolve to the most recently inserted entry.
class StatisticTable {
 public:
  explicit StatisticTable(std::size_t capacity = 100'000, double bucket_width_db = 0.25);

  void push(const StatEntry& e);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t capacity() const { return capacity_; }

  /// Chronological access, 0 = oldest retained entry.
  const StatEntry& operator[](std::size_t i) const { return entries_[i]; }

  /// Lowest-PLR entry with sinr in [lo, hi].
  std::optional<StatEntry> best_in_range(double lo_db, double hi_db) const;
  /// Lowest-PLR entry of the whole table.
  std::optional<StatEntry> best_overall() const;

 private:
  struct Key {
    double plr;
    std::uint64_t seq;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.plr != b.plr) return a.plr < b.plr;
      return a.seq > b.seq;  // newer first
    }
  };

  std::int64_t bucket_of(double sinr_db) const;
  const StatEntry& by_seq(std::uint64_t seq) const;

  std::size_t capacity_;
  double bucket_width_;
  std::deque<StatEntry> entries_;
  std::uint64_t front_seq_ = 0;  // seq of entries_.front()
  std::map<std::int64_t, std::set<Key>> buckets_;
  std::set<Key> global_;
};

}  // namespace nblink
