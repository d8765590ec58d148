#include "nblink/tpp_gan/predict.hpp"

#include <stdexcept>

namespace nblink::tpp {

LinkConfig denormalize_marks(double gamma, double m_norm, double r_norm, Direction dir,
                             int max_prb) {
  LinkConfig cfg;
  cfg.prb_count = denormalize_prb(gamma, max_prb);
  cfg.mcs = denormalize_mcs(m_norm);
  cfg.repetitions = denormalize_repetition(r_norm, RepetitionSet::for_direction(dir));
  return cfg;
}

std::vector<PredictedEvent> predict_schedule(const GanParamsd& params, double t_now_ms,
                                             double horizon_ms, std::uint64_t seed,
                                             const PredictOptions& opt) {
  std::vector<PredictedEvent> out;
  if (!(horizon_ms > t_now_ms)) return out;
  Rng rng = make_rng(seed, "predict");
  GeneratorState st = GeneratorState::fresh(params.hidden(), rng());
  const double span_ms = horizon_ms - t_now_ms;
  double t = 0.0;
  while (out.size() < opt.max_events) {
    auto ev = sample_next_event(t, st, params.gen, rng, span_ms, opt.window_s);
    if (!ev) break;
    const auto& r = ev->record;
    PredictedEvent p;
    p.t_ms = t_now_ms + r.t_ms;
    p.xi = ev->xi;
    p.alpha = r.alpha;
    p.config = denormalize_marks(r.gamma, r.m_norm, r.r_norm, opt.direction, opt.max_prb);
    p.prb_count = p.config.prb_count;
    p.record = r;
    p.record.t_ms = p.t_ms;
    out.push_back(p);
    t = r.t_ms;
  }
  return out;
}

}  // namespace nblink::tpp
