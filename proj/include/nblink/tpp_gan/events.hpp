#pragma once

#include <cstddef>
#include <vector>

namespace nblink::tpp {

inline constexpr double kMsPerSecond = 1000.0;

/// One scheduling label. alpha = 0 (no scheduling) forces every mark to 0.
struct EventRecord {
  double t_ms = 0.0;
  int alpha = 0;
  double gamma = 0.0;   // normalized PRB count
  double m_norm = 0.0;  // normalized MCS
  double r_norm = 0.0;  // normalized repetition index

  bool valid() const;
};

/// Time-ordered event list with its counting process.
class EventHistory {
 public:
  EventHistory() = default;
  explicit EventHistory(std::vector<EventRecord> events);

  /// Throws std::invalid_argument on a non-increasing time or invalid record.
  void push(const EventRecord& e);

  const std::vector<EventRecord>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  /// Right-continuous count N(t) = #{t_l <= t}.
  std::size_t count(double t_ms) const;

 private:
  std::vector<EventRecord> events_;
};

/// A training or generated sequence on [0, horizon_ms), times relative to
/// the sequence origin.
struct Sequence {
  std::vector<EventRecord> events;
  double horizon_ms = 0.0;
};

/// Sequence plus the noise draw attached to each event.
struct NoisySequence {
  std::vector<EventRecord> events;
  std::vector<double> eta;
  double horizon_ms = 0.0;
};

}  // namespace nblink::tpp
