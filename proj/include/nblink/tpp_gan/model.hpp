#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "nblink/rng.hpp"
#include "nblink/tpp_gan/events.hpp"
#include "nblink/tpp_gan/params.hpp"

namespace nblink::tpp {

inline constexpr double kExponentClamp = 50.0;
inline constexpr double kLogFloor = 1e-12;

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  using std::exp;
  return x >= Scalar(0) ? Scalar(1) / (Scalar(1) + exp(-x))
                        : exp(x) / (Scalar(1) + exp(x));
}

/// log(sigmoid(x)) without overflow.
template <typename Scalar>
Scalar log_sigmoid(Scalar x) {
  using std::exp;
  using std::log1p;
  return x >= Scalar(0) ? -log1p(exp(-x)) : x - log1p(exp(x));
}

/// Poisson(mu) noise prior; mu = 0 is the point mass at 0.
inline double sample_noise(double mu, Rng& rng) {
  if (mu < 0.0) throw std::domain_error("noise mean must be >= 0");
  if (mu == 0.0) return 0.0;
  std::poisson_distribution<int> d(mu);
  return static_cast<double>(d(rng));
}

/// Bernoulli mean of the scheduling status given the previous hidden state.
template <typename Scalar, typename DerivedH, typename DerivedW>
Scalar alpha_probability(const Eigen::MatrixBase<DerivedH>& h_prev,
                         const Eigen::MatrixBase<DerivedW>& w_alpha) {
  return sigmoid<Scalar>(w_alpha.dot(h_prev));
}

/// Standard normal density at the noise value.
template <typename Scalar>
Scalar gamma_from_noise(Scalar eta) {
  using std::exp;
  constexpr double inv_sqrt_2pi = 0.398942280401432677939946;
  return Scalar(inv_sqrt_2pi) * exp(-eta * eta / Scalar(2));
}

/// Counter-based uniforms keyed by (seed, eta, event index, lane). Marks are
/// then a deterministic function of the noise draw and the event position.
struct MarkHash {
  std::uint64_t seed = 0;

  double uniform(double eta, std::uint64_t index, std::uint64_t lane) const {
    std::uint64_t x = splitmix64(seed ^ std::bit_cast<std::uint64_t>(eta));
    x = splitmix64(x + index * 0x9e3779b97f4a7c15ULL);
    x = splitmix64(x ^ (lane + 1));
    return to_unit_open(x);
  }
};

struct McsRep {
  double m_norm = 0.0;
  double r_norm = 0.0;
};

/// Inverse CDFs: [0,1]-truncated Exp(beta) for the MCS mark, Exp(beta)
/// clamped at 1 for the repetition mark.
inline McsRep mcs_rep_from_uniforms(double u_m, double u_r, double beta) {
  McsRep out;
  out.m_norm = -std::log1p(-u_m * (-std::expm1(-beta))) / beta;
  out.r_norm = std::min(1.0, -std::log1p(-u_r) / beta);
  return out;
}

inline McsRep sample_mcs_rep(double eta, double beta, int alpha, const MarkHash& hash,
                             std::uint64_t index) {
  if (!(beta > 0.0)) throw std::domain_error("mark rate beta must be positive");
  if (alpha == 0) return {};
  return mcs_rep_from_uniforms(hash.uniform(eta, index, 0), hash.uniform(eta, index, 1), beta);
}

/// (a*g, a*m, a*r): marks as seen by the generator hidden layer.
template <typename Scalar>
Vector3<Scalar> generator_marks(Scalar alpha, Scalar gamma, Scalar m, Scalar r) {
  return Vector3<Scalar>(alpha * gamma, alpha * m, alpha * r);
}

/// (a, a*g*m, a*g*r): marks as seen by the discriminator.
template <typename Scalar>
Vector3<Scalar> discriminator_marks(Scalar alpha, Scalar gamma, Scalar m, Scalar r) {
  return Vector3<Scalar>(alpha, alpha * gamma * m, alpha * gamma * r);
}

/// Drive of the idle-input weights: (1 - a) * t * eta with t in seconds.
template <typename Scalar>
Scalar idle_drive(Scalar alpha, double t_ms, Scalar eta) {
  return (Scalar(1) - alpha) * Scalar(t_ms / kMsPerSecond) * eta;
}

template <typename Scalar>
Vector<Scalar> hidden_preactivation(const Vector<Scalar>& h_prev, double t_ms, Scalar eta,
                                    Scalar alpha, Scalar gamma, Scalar m, Scalar r,
                                    const GeneratorParams<Scalar>& g) {
  return g.recurrent * h_prev + g.label_in * generator_marks(alpha, gamma, m, r) +
         g.idle_in * idle_drive(alpha, t_ms, eta) + g.hidden_bias;
}

/// ReLU recurrence of the generator. Non-finite results throw.
template <typename Scalar>
Vector<Scalar> step_hidden(const Vector<Scalar>& h_prev, double t_ms, Scalar eta, Scalar alpha,
                           Scalar gamma, Scalar m, Scalar r, const GeneratorParams<Scalar>& g) {
  Vector<Scalar> h =
      hidden_preactivation(h_prev, t_ms, eta, alpha, gamma, m, r, g).cwiseMax(Scalar(0));
  if (!h.allFinite()) throw std::range_error("generator hidden state is not finite");
  return h;
}

template <typename Scalar>
Vector<Scalar> step_hidden(const Vector<Scalar>& h_prev, const EventRecord& e, Scalar eta,
                           const GeneratorParams<Scalar>& g) {
  return step_hidden<Scalar>(h_prev, e.t_ms, eta, Scalar(e.alpha), Scalar(e.gamma),
                             Scalar(e.m_norm), Scalar(e.r_norm), g);
}

template <typename Scalar>
Scalar clamp_exponent(Scalar z) {
  return std::clamp(z, Scalar(-kExponentClamp), Scalar(kExponentClamp));
}

/// Intensity exponent at `elapsed_s` seconds after the last event.
template <typename Scalar>
Scalar intensity_exponent(Scalar elapsed_s, const Vector<Scalar>& h,
                          const GeneratorParams<Scalar>& g) {
  return g.intensity_readout.dot(h) + g.intensity_slope * elapsed_s + g.intensity_bias;
}

/// Conditional intensity in events per second, exponent clamped to +-50.
template <typename Scalar>
Scalar intensity(Scalar elapsed_s, const Vector<Scalar>& h, const GeneratorParams<Scalar>& g) {
  using std::exp;
  return exp(clamp_exponent(intensity_exponent(elapsed_s, h, g)));
}

/// Per-step probability that each step belongs to a real sequence.
template <typename Scalar>
std::vector<Scalar> discriminator_score(std::span<const Vector3<Scalar>> marks,
                                        const DiscriminatorParams<Scalar>& d) {
  std::vector<Scalar> out;
  out.reserve(marks.size());
  Vector<Scalar> phi = Vector<Scalar>::Zero(d.hidden());
  for (const auto& y : marks) {
    phi = (d.recurrent * phi + d.label_in * y + d.hidden_bias).unaryExpr(
        [](Scalar v) { return sigmoid(v); });
    out.push_back(sigmoid<Scalar>(d.readout.dot(phi)));
  }
  return out;
}

template <typename Scalar>
std::vector<Vector3<Scalar>> discriminator_marks(std::span<const EventRecord> events) {
  std::vector<Vector3<Scalar>> out;
  out.reserve(events.size());
  for (const auto& e : events)
    out.push_back(discriminator_marks<Scalar>(Scalar(e.alpha), Scalar(e.gamma),
                                              Scalar(e.m_norm), Scalar(e.r_norm)));
  return out;
}

}  // namespace nblink::tpp
