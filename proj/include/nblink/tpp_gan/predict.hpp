#pragma once

#include <cstdint>
#include <vector>

#include "nblink/link_model.hpp"
#include "nblink/tpp_gan/sampler.hpp"

namespace nblink::tpp {

struct PredictedEvent {
  double t_ms = 0.0;
  double xi = 0.5;
  int alpha = 0;
  int prb_count = 1;
  LinkConfig config;
  EventRecord record;  // normalized marks as generated
};

struct PredictOptions {
  Direction direction = Direction::uplink;
  int max_prb = kDefaultMaxPrb;
  std::size_t max_events = 100000;
  double window_s = kDefaultOgataWindowS;
};

/// PRB count and (MCS, repetition) nearest to a normalized mark triple.
LinkConfig denormalize_marks(double gamma, double m_norm, double r_norm, Direction dir,
                             int max_prb = kDefaultMaxPrb);

/// Generated scheduling events on [t_now_ms, horizon_ms), starting from a
/// fresh generator state anchored at t_now_ms.
std::vector<PredictedEvent> predict_schedule(const GanParamsd& params, double t_now_ms,
                                             double horizon_ms, std::uint64_t seed,
                                             const PredictOptions& opt = {});

}  // namespace nblink::tpp
