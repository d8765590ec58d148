#include "nblink/tpp_gan/events.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nblink::tpp {

namespace {
bool unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }
}  // namespace

bool EventRecord::valid() const {
  if (!std::isfinite(t_ms)) return false;
  if (alpha != 0 && alpha != 1) return false;
  if (!unit(gamma) || !unit(m_norm) || !unit(r_norm)) return false;
  if (alpha == 0) return gamma == 0.0 && m_norm == 0.0 && r_norm == 0.0;
  return true;
}

EventHistory::EventHistory(std::vector<EventRecord> events) {
  events_.reserve(events.size());
  for (const auto& e : events) push(e);
}

void EventHistory::push(const EventRecord& e) {
  if (!e.valid()) throw std::invalid_argument("invalid event record");
  if (!events_.empty() && !(e.t_ms > events_.back().t_ms))
    throw std::invalid_argument("event times must strictly increase");
  events_.push_back(e);
}

std::size_t EventHistory::count(double t_ms) const {
  auto it = std::upper_bound(events_.begin(), events_.end(), t_ms,
                             [](double t, const EventRecord& e) { return t < e.t_ms; });
  return static_cast<std::size_t>(it - events_.begin());
}

}  // namespace nblink::tpp
