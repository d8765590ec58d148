#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string_view>
#include <type_traits>

#include "nblink/rng.hpp"

namespace nblink::tpp {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

/// Generator RNN weights plus the constant noise/mark distribution shapes.
///
/// Checkpoint tensor tags are given next to each member.
template <typename Scalar>
struct GeneratorParams {
  Matrix<Scalar> recurrent;        // W1, H x H
  Matrix<Scalar> label_in;         // W2, H x 3 over (a*g, a*m, a*r)
  Vector<Scalar> idle_in;          // W3, H x 1 over (1-a)*t*eta
  Vector<Scalar> hidden_bias;      // b_h
  Vector<Scalar> schedule_readout; // w_alpha
  Vector<Scalar> intensity_readout;// W_g
  Scalar intensity_slope{0};       // c_g, per second
  Scalar intensity_bias{0};        // b_g
  Scalar noise_mean{1};            // mu, not trained
  Scalar mark_rate{2};             // beta, not trained

  Eigen::Index hidden() const { return recurrent.rows(); }

  static GeneratorParams zeros(Eigen::Index h, Scalar mu = Scalar(1), Scalar beta = Scalar(2)) {
    GeneratorParams p;
    p.recurrent = Matrix<Scalar>::Zero(h, h);
    p.label_in = Matrix<Scalar>::Zero(h, 3);
    p.idle_in = Vector<Scalar>::Zero(h);
    p.hidden_bias = Vector<Scalar>::Zero(h);
    p.schedule_readout = Vector<Scalar>::Zero(h);
    p.intensity_readout = Vector<Scalar>::Zero(h);
    p.noise_mean = mu;
    p.mark_rate = beta;
    return p;
  }
};

template <typename Scalar>
struct DiscriminatorParams {
  Matrix<Scalar> recurrent;    // W4, H x H
  Matrix<Scalar> label_in;     // W5, H x 3 over (a, a*g*m, a*g*r)
  Vector<Scalar> hidden_bias;  // b_d
  Vector<Scalar> readout;      // w_out

  Eigen::Index hidden() const { return recurrent.rows(); }

  static DiscriminatorParams zeros(Eigen::Index h) {
    DiscriminatorParams p;
    p.recurrent = Matrix<Scalar>::Zero(h, h);
    p.label_in = Matrix<Scalar>::Zero(h, 3);
    p.hidden_bias = Vector<Scalar>::Zero(h);
    p.readout = Vector<Scalar>::Zero(h);
    return p;
  }
};

template <typename Scalar>
struct GanParams {
  GeneratorParams<Scalar> gen;
  DiscriminatorParams<Scalar> disc;

  Eigen::Index hidden() const { return gen.hidden(); }

  static GanParams zeros(Eigen::Index h, Scalar mu = Scalar(1), Scalar beta = Scalar(2)) {
    return {GeneratorParams<Scalar>::zeros(h, mu, beta), DiscriminatorParams<Scalar>::zeros(h)};
  }
};

using GeneratorParamsd = GeneratorParams<double>;
using DiscriminatorParamsd = DiscriminatorParams<double>;
using GanParamsd = GanParams<double>;

namespace detail {
template <typename Gen, typename F>
void visit_generator(Gen& g, F&& f) {
  auto map = [](auto& t) {
    using T = std::remove_reference_t<decltype(t)>;
    using Base = std::conditional_t<std::is_const_v<Gen>, const Matrix<typename T::Scalar>,
                                    Matrix<typename T::Scalar>>;
    return Eigen::Map<Base>(t.data(), t.rows(), t.cols());
  };
  auto scalar = [](auto& s) {
    using S = std::remove_const_t<std::remove_reference_t<decltype(s)>>;
    using Base = std::conditional_t<std::is_const_v<Gen>, const Matrix<S>, Matrix<S>>;
    return Eigen::Map<Base>(&s, 1, 1);
  };
  f("W1", map(g.recurrent));
  f("W2", map(g.label_in));
  f("W3", map(g.idle_in));
  f("b_h", map(g.hidden_bias));
  f("w_alpha", map(g.schedule_readout));
  f("W_g", map(g.intensity_readout));
  f("c_g", scalar(g.intensity_slope));
  f("b_g", scalar(g.intensity_bias));
}

template <typename Disc, typename F>
void visit_discriminator(Disc& d, F&& f) {
  auto map = [](auto& t) {
    using T = std::remove_reference_t<decltype(t)>;
    using Base = std::conditional_t<std::is_const_v<Disc>, const Matrix<typename T::Scalar>,
                                    Matrix<typename T::Scalar>>;
    return Eigen::Map<Base>(t.data(), t.rows(), t.cols());
  };
  f("W4", map(d.recurrent));
  f("W5", map(d.label_in));
  f("b_d", map(d.hidden_bias));
  f("w_out", map(d.readout));
}
}  // namespace detail

/// Calls f(tag, Eigen::Map) for every trainable tensor, in checkpoint order.
template <typename Scalar, typename F>
void visit_trainable(GeneratorParams<Scalar>& g, F&& f) { detail::visit_generator(g, f); }
template <typename Scalar, typename F>
void visit_trainable(const GeneratorParams<Scalar>& g, F&& f) { detail::visit_generator(g, f); }
template <typename Scalar, typename F>
void visit_trainable(DiscriminatorParams<Scalar>& d, F&& f) { detail::visit_discriminator(d, f); }
template <typename Scalar, typename F>
void visit_trainable(const DiscriminatorParams<Scalar>& d, F&& f) {
  detail::visit_discriminator(d, f);
}

/// Uniform(-scale, scale) weights, zero biases.
template <typename Scalar>
GanParams<Scalar> initialize(Eigen::Index h, Scalar mu, Scalar beta, Scalar scale,
                             std::uint64_t seed) {
  if (h < 1) throw std::invalid_argument("hidden width must be >= 1");
  Rng rng = make_rng(seed, "gan-init");
  std::uniform_real_distribution<double> u(-static_cast<double>(scale),
                                           static_cast<double>(scale));
  auto fill = [&](auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = Scalar(u(rng));
  };
  GanParams<Scalar> p = GanParams<Scalar>::zeros(h, mu, beta);
  fill(p.gen.recurrent);
  fill(p.gen.label_in);
  fill(p.gen.idle_in);
  fill(p.gen.schedule_readout);
  fill(p.gen.intensity_readout);
  p.gen.intensity_slope = Scalar(u(rng));
  fill(p.disc.recurrent);
  fill(p.disc.label_in);
  fill(p.disc.readout);
  return p;
}

template <typename Scalar>
bool all_finite(const GanParams<Scalar>& p) {
  bool ok = std::isfinite(static_cast<double>(p.gen.noise_mean)) &&
            std::isfinite(static_cast<double>(p.gen.mark_rate));
  auto check = [&](std::string_view, const auto& m) { ok = ok && m.allFinite(); };
  visit_trainable(p.gen, check);
  visit_trainable(p.disc, check);
  return ok;
}

}  // namespace nblink::tpp
