#include "nblink/tpp_gan/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nblink::tpp {

namespace {

NoisySequence random_sequence(std::size_t n, double horizon_ms, Rng& rng) {
  std::uniform_real_distribution<double> t(0.0, horizon_ms);
  std::vector<double> times(n);
  for (auto& x : times) x = t(rng);
  std::sort(times.begin(), times.end());
  NoisySequence s;
  s.horizon_ms = horizon_ms;
  for (double x : times) {
    EventRecord e;
    e.t_ms = x;
    e.alpha = uniform01(rng) < 0.7 ? 1 : 0;
    if (e.alpha) {
      e.gamma = uniform01(rng);
      e.m_norm = uniform01(rng);
      e.r_norm = uniform01(rng);
    }
    s.events.push_back(e);
    s.eta.push_back(std::floor(3.0 * uniform01(rng)));
  }
  return s;
}

double relative_error(double a, double n, double floor) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor});
}

template <typename Params, typename Objective>
void compare(Params& params, const Params& analytic, Objective objective,
             const GradCheckOptions& opt, std::vector<TensorGradError>& out) {
  std::vector<Eigen::Map<const Matrix<double>>> grads;
  visit_trainable(analytic, [&](std::string_view, auto m) { grads.push_back(m); });
  std::size_t k = 0;
  visit_trainable(params, [&](std::string_view tag, auto m) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.tag == tag; });
    if (it == out.end()) it = out.insert(out.end(), TensorGradError{std::string(tag), 0.0});
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double saved = m.data()[i];
      m.data()[i] = saved + opt.step;
      const double up = objective();
      m.data()[i] = saved - opt.step;
      const double down = objective();
      m.data()[i] = saved;
      const double numeric = (up - down) / (2.0 * opt.step);
      it->max_relative_error = std::max(
          it->max_relative_error, relative_error(grads[k].data()[i], numeric, opt.relative_floor));
    }
    ++k;
  });
}

}  // namespace

GradCheckCase make_gradcheck_case(std::uint64_t seed, const GradCheckOptions& opt) {
  Rng rng = make_rng(seed, "gradcheck");
  GradCheckCase c;
  c.params = initialize<double>(opt.hidden, 1.0, 2.0, opt.init_scale, rng());
  std::uniform_real_distribution<double> u(-opt.init_scale, opt.init_scale);
  for (Eigen::Index i = 0; i < opt.hidden; ++i) {
    c.params.gen.hidden_bias(i) = u(rng);
    c.params.disc.hidden_bias(i) = u(rng);
  }
  c.params.gen.intensity_bias = u(rng);
  const double horizon_ms = 3000.0;
  c.real = random_sequence(opt.n_events, horizon_ms, rng);
  c.fake = random_sequence(opt.n_events, horizon_ms, rng);
  return c;
}

GradCheckReport check_gradients(std::uint64_t seed, const GradCheckOptions& opt) {
  GradCheckReport rep;
  for (std::size_t s = 0; s < opt.n_seeds; ++s) {
    GradCheckCase c = make_gradcheck_case(splitmix64(seed + s), opt);
    const auto analytic = gan_gradients(c.real, c.fake, c.params);
    compare(c.params.gen, analytic.gen,
            [&] { return gan_loss(c.real, c.fake, c.params).generator; }, opt, rep.tensors);
    compare(c.params.disc, analytic.disc,
            [&] { return gan_loss(c.real, c.fake, c.params).discriminator; }, opt, rep.tensors);
  }
  for (const auto& t : rep.tensors) {
    if (t.max_relative_error >= rep.max_relative_error) {
      rep.max_relative_error = t.max_relative_error;
      rep.worst_tag = t.tag;
    }
  }
  rep.passed = rep.max_relative_error < opt.tolerance;
  return rep;
}

}  // namespace nblink::tpp
