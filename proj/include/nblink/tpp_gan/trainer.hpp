#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nblink/tpp_gan/objective.hpp"
#include "nblink/tpp_gan/sampler.hpp"

namespace nblink::tpp {

struct TrainOptions {
  std::size_t epochs = 0;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  Eigen::Index hidden = 32;
  double noise_mean = 1.0;
  double mark_rate = 2.0;
  double init_scale = 0.1;
  double grad_clip = 5.0;
  double window_s = kDefaultOgataWindowS;
  // Fake sequences are capped at fake_factor * n_real + fake_extra events.
  std::size_t fake_factor = 4;
  std::size_t fake_extra = 32;
  std::function<void(std::size_t epoch, double gen_loss, double disc_loss)> on_epoch;
};

struct TrainResult {
  GanParamsd params;
  std::vector<double> generator_loss;      // per-epoch mean
  std::vector<double> discriminator_loss;  // per-epoch mean
  std::size_t skipped_steps = 0;
};

/// theta -= lr * clip(grad) (descent) or theta += lr * clip(grad) (ascent).
/// Returns false, leaving params untouched, when any gradient entry is not
/// finite.
template <typename Params>
bool sgd_step(Params& params, const Params& grad, double learning_rate, bool ascent,
              double clip = 5.0) {
  bool finite = true;
  visit_trainable(grad, [&](std::string_view, const auto& m) { finite = finite && m.allFinite(); });
  if (!finite) return false;
  const double sign = ascent ? 1.0 : -1.0;
  std::vector<Eigen::Map<const Matrix<double>>> g_maps;
  visit_trainable(grad, [&](std::string_view, auto m) { g_maps.push_back(m); });
  std::size_t i = 0;
  visit_trainable(params, [&](std::string_view, auto m) {
    m += (sign * learning_rate) * g_maps[i++].cwiseMax(-clip).cwiseMin(clip);
  });
  return true;
}

/// Splits a record stream into training windows of window_ms. A time that
/// does not increase starts a new episode. Times become window-relative and
/// the horizon is the window length. The trailing partial window of each
/// episode is dropped unless it is the episode's only one; empty windows are
/// skipped.
std::vector<Sequence> split_windows(std::span<const EventRecord> records, double window_ms);

/// Seeded initialization followed by training.
TrainResult train(std::span<const Sequence> data, const TrainOptions& opt);

/// Continues training from given parameters.
TrainResult train(GanParamsd init, std::span<const Sequence> data, const TrainOptions& opt);

/// Events per second of generated sequences, averaged over n_sequences.
double generated_rate(const GeneratorParamsd& g, double horizon_ms, std::size_t n_sequences,
                      std::uint64_t seed, std::size_t max_events = 1000000);

}  // namespace nblink::tpp
