#include "nblink/tpp_gan/sampler.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nblink::tpp {

std::optional<SampledEvent> sample_next_event(double t_now_ms, GeneratorState& state,
                                              const GeneratorParamsd& g, Rng& rng,
                                              double horizon_ms, double window_s) {
  if (!(window_s > 0.0)) throw std::invalid_argument("thinning window must be positive");
  if (state.h.size() != g.hidden()) throw std::invalid_argument("state width mismatch");
  const double a = g.intensity_readout.dot(state.h) + g.intensity_bias;
  const double c = g.intensity_slope;
  auto rate = [&](double t_ms) {
    return std::exp(clamp_exponent(a + c * (t_ms - state.t_last_ms) / kMsPerSecond));
  };

  double t = std::max(t_now_ms, state.t_last_ms);
  while (t < horizon_ms) {
    // lambda is monotone between events, so its value at the far end of the
    // window (rising) or at the current time (falling) bounds it.
    const double window_end = c > 0.0 ? std::min(horizon_ms, t + window_s * kMsPerSecond)
                                      : horizon_ms;
    const double bound = c > 0.0 ? rate(window_end) : rate(t);
    if (!(bound > 0.0) || !std::isfinite(bound)) return std::nullopt;
    std::exponential_distribution<double> gap(bound);
    const double cand = t + gap(rng) * kMsPerSecond;
    if (cand >= window_end) {
      t = window_end;
      continue;
    }
    const double u = uniform01(rng);
    if (u * bound > rate(cand)) {
      t = cand;
      continue;
    }
    const double t_event = cand > state.t_last_ms ? cand
                           : std::nextafter(state.t_last_ms, INFINITY);
    if (!(t_event < horizon_ms)) return std::nullopt;

    SampledEvent out;
    out.xi = alpha_probability<double>(state.h, g.schedule_readout);
    out.eta = sample_noise(g.noise_mean, rng);
    const int alpha = uniform01(rng) < out.xi ? 1 : 0;
    const McsRep mr = sample_mcs_rep(out.eta, g.mark_rate, alpha, state.hash, state.index);
    out.record = {t_event, alpha, alpha ? gamma_from_noise(out.eta) : 0.0, mr.m_norm,
                  mr.r_norm};
    state.h = step_hidden<double>(state.h, out.record, out.eta, g);
    state.t_last_ms = t_event;
    ++state.index;
    return out;
  }
  return std::nullopt;
}

NoisySequence generate_sequence(const GeneratorParamsd& g, double horizon_ms, Rng& rng,
                                std::size_t max_events, double window_s) {
  NoisySequence seq;
  seq.horizon_ms = horizon_ms;
  GeneratorState st = GeneratorState::fresh(g.hidden(), rng());
  double t = 0.0;
  while (seq.events.size() < max_events) {
    auto ev = sample_next_event(t, st, g, rng, horizon_ms, window_s);
    if (!ev) break;
    seq.events.push_back(ev->record);
    seq.eta.push_back(ev->eta);
    t = ev->record.t_ms;
  }
  return seq;
}

}  // namespace nblink::tpp
