#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "nblink/tpp_gan/model.hpp"

namespace nblink::tpp {

namespace detail {

// expm1(x)/x and (e^x (x-1) + 1)/x^2, i.e. the integrals of e^{xu} and
// u e^{xu} over u in [0, 1].
template <typename Scalar>
Scalar phi1(Scalar x) {
  using std::abs;
  using std::expm1;
  if (abs(x) < Scalar(1e-2))
    return Scalar(1) + x / Scalar(2) + x * x / Scalar(6) + x * x * x / Scalar(24) +
           x * x * x * x / Scalar(120);
  return expm1(x) / x;
}

template <typename Scalar>
Scalar phi2(Scalar x) {
  using std::abs;
  using std::exp;
  if (abs(x) < Scalar(1e-2))
    return Scalar(0.5) + x / Scalar(3) + x * x / Scalar(8) + x * x * x / Scalar(30) +
           x * x * x * x / Scalar(144);
  return (exp(x) * (x - Scalar(1)) + Scalar(1)) / (x * x);
}

}  // namespace detail

template <typename Scalar>
struct SegmentIntegral {
  Scalar value{0};
  Scalar d_offset{0};  // d/da
  Scalar d_slope{0};   // d/dc
};

/// Integral over s in [0, dt] of exp(clamp(a + c s, -50, 50)), with its
/// partial derivatives in a and c. Clamped stretches are integrated as
/// constants and contribute no gradient.
template <typename Scalar>
SegmentIntegral<Scalar> segment_integral(Scalar a, Scalar c, Scalar dt) {
  using std::abs;
  using std::exp;
  using std::max;
  using std::min;
  SegmentIntegral<Scalar> out;
  if (!(dt > Scalar(0))) return out;
  const Scalar lim(kExponentClamp);
  const Scalar hi_level = exp(lim);
  const Scalar lo_level = exp(-lim);
  auto clamped_level = [&](Scalar z) { return z > Scalar(0) ? hi_level : lo_level; };

  if (abs(c) < Scalar(1e-9)) {
    if (a > lim || a < -lim) {
      out.value = clamped_level(a) * dt;
      return out;
    }
    const Scalar ea = exp(a);
    out.value = dt * ea;
    out.d_offset = out.value;
    out.d_slope = ea * dt * dt / Scalar(2);
    return out;
  }

  const Scalar s_a = (-lim - a) / c;
  const Scalar s_b = (lim - a) / c;
  const Scalar u0 = max(Scalar(0), min(s_a, s_b));
  const Scalar u1 = min(dt, max(s_a, s_b));
  if (!(u1 > u0)) {
    out.value = clamped_level(a + c * dt / Scalar(2)) * dt;
    return out;
  }
  if (u0 > Scalar(0)) out.value += clamped_level(a + c * u0 / Scalar(2)) * u0;
  if (u1 < dt) out.value += clamped_level(a + c * (u1 + dt) / Scalar(2)) * (dt - u1);

  const Scalar width = u1 - u0;
  const Scalar base = exp(a + c * u0);
  const Scalar x = c * width;
  const Scalar inner = base * width * detail::phi1(x);
  out.value += inner;
  out.d_offset = inner;
  out.d_slope = base * (u0 * width * detail::phi1(x) + width * width * detail::phi2(x));
  return out;
}

/// Hidden states of a generator pass over a sequence: h[0] = 0, h[l] after
/// event l, with the matching pre-activations.
template <typename Scalar>
struct GeneratorTrace {
  std::vector<Vector<Scalar>> h;
  std::vector<Vector<Scalar>> pre;
};

template <typename Scalar>
GeneratorTrace<Scalar> rollout(std::span<const EventRecord> events, std::span<const double> eta,
                               const GeneratorParams<Scalar>& g) {
  if (eta.size() != events.size())
    throw std::invalid_argument("rollout: one noise value per event required");
  GeneratorTrace<Scalar> tr;
  tr.h.reserve(events.size() + 1);
  tr.pre.reserve(events.size());
  tr.h.push_back(Vector<Scalar>::Zero(g.hidden()));
  for (std::size_t l = 0; l < events.size(); ++l) {
    const auto& e = events[l];
    tr.pre.push_back(hidden_preactivation<Scalar>(tr.h.back(), e.t_ms, Scalar(eta[l]),
                                                  Scalar(e.alpha), Scalar(e.gamma),
                                                  Scalar(e.m_norm), Scalar(e.r_norm), g));
    tr.h.push_back(tr.pre.back().cwiseMax(Scalar(0)));
    if (!tr.h.back().allFinite()) throw std::range_error("generator hidden state is not finite");
  }
  return tr;
}

template <typename Scalar>
struct LikelihoodParts {
  Scalar log_intensity_sum{0};
  Scalar compensator{0};
  Scalar value() const { return log_intensity_sum - compensator; }
};

namespace detail {

inline void check_sequence(std::span<const EventRecord> events, double horizon_ms) {
  double prev = -INFINITY;
  for (const auto& e : events) {
    if (!(e.t_ms > prev)) throw std::invalid_argument("event times must strictly increase");
    if (e.t_ms < 0.0) throw std::invalid_argument("event times must be >= 0");
    prev = e.t_ms;
  }
  if (!events.empty() && !(events.back().t_ms < horizon_ms))
    throw std::invalid_argument("all event times must precede the horizon");
}

// Shared forward/backward pass of the log-likelihood. When grad is non-null,
// weight * d(logL)/d(theta_G) is accumulated into it.
template <typename Scalar>
LikelihoodParts<Scalar> likelihood_pass(std::span<const EventRecord> events,
                                        std::span<const double> eta, double horizon_ms,
                                        const GeneratorParams<Scalar>& g,
                                        GeneratorParams<Scalar>* grad, Scalar weight) {
  check_sequence(events, horizon_ms);
  const GeneratorTrace<Scalar> tr = rollout<Scalar>(events, eta, g);
  const std::size_t n = events.size();
  LikelihoodParts<Scalar> parts;
  std::vector<Scalar> g_offset(n + 1, Scalar(0));
  Scalar g_slope(0);
  double t_prev = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double t_end = j < n ? events[j].t_ms : horizon_ms;
    const Scalar dt((t_end - t_prev) / kMsPerSecond);
    const Scalar a = g.intensity_readout.dot(tr.h[j]) + g.intensity_bias;
    const auto seg = segment_integral<Scalar>(a, g.intensity_slope, dt);
    parts.compensator += seg.value;
    g_offset[j] -= seg.d_offset;
    g_slope -= seg.d_slope;
    if (j < n) {
      const Scalar z = a + g.intensity_slope * dt;
      parts.log_intensity_sum += clamp_exponent(z);
      if (z > Scalar(-kExponentClamp) && z < Scalar(kExponentClamp)) {
        g_offset[j] += Scalar(1);
        g_slope += dt;
      }
    }
    t_prev = t_end;
  }
  if (grad == nullptr) return parts;

  for (std::size_t j = 0; j <= n; ++j) {
    grad->intensity_readout += weight * g_offset[j] * tr.h[j];
    grad->intensity_bias += weight * g_offset[j];
  }
  grad->intensity_slope += weight * g_slope;

  Vector<Scalar> gh = weight * g_offset[n] * g.intensity_readout;
  for (std::size_t l = n; l >= 1; --l) {
    const auto& e = events[l - 1];
    const Vector<Scalar> gpre =
        gh.cwiseProduct((tr.pre[l - 1].array() > Scalar(0)).template cast<Scalar>().matrix());
    grad->recurrent += gpre * tr.h[l - 1].transpose();
    grad->label_in += gpre * generator_marks<Scalar>(Scalar(e.alpha), Scalar(e.gamma),
                                                     Scalar(e.m_norm), Scalar(e.r_norm))
                                 .transpose();
    grad->idle_in += gpre * idle_drive<Scalar>(Scalar(e.alpha), e.t_ms, Scalar(eta[l - 1]));
    grad->hidden_bias += gpre;
    gh = g.recurrent.transpose() * gpre + weight * g_offset[l - 1] * g.intensity_readout;
  }
  return parts;
}

}  // namespace detail

/// Sum of log-intensities at the events minus the compensator on [0, T].
template <typename Scalar>
LikelihoodParts<Scalar> log_likelihood_parts(const NoisySequence& seq,
                                             const GeneratorParams<Scalar>& g) {
  return detail::likelihood_pass<Scalar>(seq.events, seq.eta, seq.horizon_ms, g, nullptr,
                                         Scalar(0));
}

template <typename Scalar>
Scalar log_likelihood(const NoisySequence& seq, const GeneratorParams<Scalar>& g) {
  return log_likelihood_parts(seq, g).value();
}

/// Discriminator log-probability sum over a mark sequence: sum log D for a
/// real sequence, sum log(1 - D) for a fake one, each floored at 1e-12.
/// Optional outputs accumulate d/d(theta_D) and return d/d(marks).
template <typename Scalar>
Scalar discriminator_term(std::span<const Vector3<Scalar>> marks, bool real,
                          const DiscriminatorParams<Scalar>& d,
                          DiscriminatorParams<Scalar>* grad = nullptr,
                          std::vector<Vector3<Scalar>>* grad_marks = nullptr) {
  const std::size_t n = marks.size();
  const Eigen::Index hdim = d.hidden();
  std::vector<Vector<Scalar>> phi;
  phi.reserve(n + 1);
  phi.push_back(Vector<Scalar>::Zero(hdim));
  std::vector<Scalar> g_out(n, Scalar(0));
  const Scalar log_floor = std::log(Scalar(kLogFloor));
  Scalar total(0);
  for (std::size_t l = 0; l < n; ++l) {
    phi.push_back((d.recurrent * phi.back() + d.label_in * marks[l] + d.hidden_bias)
                      .unaryExpr([](Scalar v) { return sigmoid(v); }));
    const Scalar o = d.readout.dot(phi.back());
    const Scalar term = real ? log_sigmoid(o) : log_sigmoid(-o);
    if (term > log_floor) {
      total += term;
      g_out[l] = real ? sigmoid(-o) : -sigmoid(o);
    } else {
      total += log_floor;
    }
  }
  if (grad == nullptr && grad_marks == nullptr) return total;
  if (grad_marks) grad_marks->assign(n, Vector3<Scalar>::Zero());

  Vector<Scalar> g_phi_future = Vector<Scalar>::Zero(hdim);  // W4^T dq_{l+1}
  for (std::size_t l = n; l >= 1; --l) {
    const Vector<Scalar>& p = phi[l];
    const Vector<Scalar> g_phi = g_out[l - 1] * d.readout + g_phi_future;
    const Vector<Scalar> gq = g_phi.cwiseProduct(
        (p.array() * (Scalar(1) - p.array())).matrix());
    if (grad) {
      grad->readout += g_out[l - 1] * p;
      grad->recurrent += gq * phi[l - 1].transpose();
      grad->label_in += gq * marks[l - 1].transpose();
      grad->hidden_bias += gq;
    }
    if (grad_marks) (*grad_marks)[l - 1] = d.label_in.transpose() * gq;
    g_phi_future = d.recurrent.transpose() * gq;
  }
  return total;
}

/// Fake marks exposed to the discriminator: the scheduling status enters
/// through its Bernoulli mean, so the adversarial term stays differentiable
/// in the generator weights along a fixed sampled trajectory.
template <typename Scalar>
struct SoftFakeMarks {
  GeneratorTrace<Scalar> trace;
  std::vector<Scalar> xi;
  std::vector<Vector3<Scalar>> marks;
};

template <typename Scalar>
SoftFakeMarks<Scalar> soft_fake_marks(const NoisySequence& fake,
                                      const GeneratorParams<Scalar>& g) {
  SoftFakeMarks<Scalar> out;
  out.trace = rollout<Scalar>(fake.events, fake.eta, g);
  for (std::size_t l = 0; l < fake.events.size(); ++l) {
    const auto& e = fake.events[l];
    const Scalar xi = alpha_probability<Scalar>(out.trace.h[l], g.schedule_readout);
    out.xi.push_back(xi);
    out.marks.push_back(
        discriminator_marks<Scalar>(xi, Scalar(e.gamma), Scalar(e.m_norm), Scalar(e.r_norm)));
  }
  return out;
}

template <typename Scalar>
struct GanObjectives {
  Scalar generator{0};      // minimized: -logL(real) + sum_fake log(1 - D)
  Scalar discriminator{0};  // maximized: sum_real log D + sum_fake log(1 - D)
};

template <typename Scalar>
GanObjectives<Scalar> gan_loss(const NoisySequence& real, const NoisySequence& fake,
                               const GanParams<Scalar>& p) {
  const Scalar log_lik = log_likelihood(real, p.gen);
  const auto real_marks = discriminator_marks<Scalar>(std::span(real.events));
  const Scalar real_term = discriminator_term<Scalar>(real_marks, true, p.disc);
  Scalar fake_term(0);
  if (!fake.events.empty()) {
    const auto soft = soft_fake_marks(fake, p.gen);
    fake_term = discriminator_term<Scalar>(soft.marks, false, p.disc);
  }
  return {-log_lik + fake_term, real_term + fake_term};
}

template <typename Scalar>
struct GanGradients {
  GanObjectives<Scalar> value;
  GeneratorParams<Scalar> gen;       // d(generator objective)/d(theta_G)
  DiscriminatorParams<Scalar> disc;  // d(discriminator objective)/d(theta_D)
};

/// Backpropagation through time of both objectives on one (real, fake) pair.
template <typename Scalar>
GanGradients<Scalar> gan_gradients(const NoisySequence& real, const NoisySequence& fake,
                                   const GanParams<Scalar>& p) {
  const Eigen::Index hdim = p.hidden();
  GanGradients<Scalar> out{{},
                           GeneratorParams<Scalar>::zeros(hdim, Scalar(0), Scalar(0)),
                           DiscriminatorParams<Scalar>::zeros(hdim)};

  const auto parts = detail::likelihood_pass<Scalar>(real.events, real.eta, real.horizon_ms,
                                                     p.gen, &out.gen, Scalar(-1));
  const auto real_marks = discriminator_marks<Scalar>(std::span(real.events));
  const Scalar real_term = discriminator_term<Scalar>(real_marks, true, p.disc, &out.disc);

  Scalar fake_term(0);
  if (!fake.events.empty()) {
    const auto soft = soft_fake_marks(fake, p.gen);
    std::vector<Vector3<Scalar>> g_marks;
    fake_term = discriminator_term<Scalar>(soft.marks, false, p.disc, &out.disc, &g_marks);

    const std::size_t n = fake.events.size();
    const auto& g = p.gen;
    std::vector<Scalar> g_logit(n);
    for (std::size_t l = 0; l < n; ++l) {
      const auto& e = fake.events[l];
      const Scalar g_xi = g_marks[l](0) + g_marks[l](1) * Scalar(e.gamma * e.m_norm) +
                          g_marks[l](2) * Scalar(e.gamma * e.r_norm);
      g_logit[l] = g_xi * soft.xi[l] * (Scalar(1) - soft.xi[l]);
      out.gen.schedule_readout += g_logit[l] * soft.trace.h[l];
    }
    Vector<Scalar> gh = Vector<Scalar>::Zero(hdim);
    for (std::size_t l = n; l >= 1; --l) {
      const auto& e = fake.events[l - 1];
      const Vector<Scalar> gpre = gh.cwiseProduct(
          (soft.trace.pre[l - 1].array() > Scalar(0)).template cast<Scalar>().matrix());
      out.gen.recurrent += gpre * soft.trace.h[l - 1].transpose();
      out.gen.label_in += gpre * generator_marks<Scalar>(Scalar(e.alpha), Scalar(e.gamma),
                                                         Scalar(e.m_norm), Scalar(e.r_norm))
                                     .transpose();
      out.gen.idle_in += gpre * idle_drive<Scalar>(Scalar(e.alpha), e.t_ms, Scalar(fake.eta[l - 1]));
      out.gen.hidden_bias += gpre;
      gh = g.recurrent.transpose() * gpre + g_logit[l - 1] * g.schedule_readout;
    }
  }
  out.value = {-parts.value() + fake_term, real_term + fake_term};
  return out;
}

}  // namespace nblink::tpp
