#pragma once

#include <cstdint>
#include <optional>

#include "nblink/rng.hpp"
#include "nblink/tpp_gan/model.hpp"

namespace nblink::tpp {

/// Generator state between sampled events. Times are relative to the
/// sequence origin, which is also the intensity reference before any event.
struct GeneratorState {
  Vector<double> h;
  double t_last_ms = 0.0;
  std::uint64_t index = 0;
  MarkHash hash;

  static GeneratorState fresh(Eigen::Index hidden, std::uint64_t hash_seed) {
    return {Vector<double>::Zero(hidden), 0.0, 0, MarkHash{hash_seed}};
  }
};

struct SampledEvent {
  EventRecord record;
  double eta = 0.0;
  double xi = 0.5;  // scheduling probability the label was drawn from
};

inline constexpr double kDefaultOgataWindowS = 1.0;

/// Next event after t_now_ms by thinning, with the hidden state advanced on
/// acceptance. Returns nothing once the horizon is reached or the bound
/// underflows to zero.
std::optional<SampledEvent> sample_next_event(double t_now_ms, GeneratorState& state,
                                              const GeneratorParamsd& g, Rng& rng,
                                              double horizon_ms,
                                              double window_s = kDefaultOgataWindowS);

/// Whole sequence on [0, horizon_ms) from a fresh state; at most max_events.
NoisySequence generate_sequence(const GeneratorParamsd& g, double horizon_ms, Rng& rng,
                                std::size_t max_events, double window_s = kDefaultOgataWindowS);

}  // namespace nblink::tpp
