#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nblink/tpp_gan/objective.hpp"

namespace nblink::tpp {

struct GradCheckOptions {
  std::size_t n_seeds = 20;
  Eigen::Index hidden = 4;
  std::size_t n_events = 3;
  double step = 1e-5;
  double tolerance = 1e-4;
  // Denominator floor of the relative error, so entries whose true
  // gradient is zero are compared absolutely.
  double relative_floor = 1e-6;
  double init_scale = 0.5;
};

struct TensorGradError {
  std::string tag;
  double max_relative_error = 0.0;
};

struct GradCheckReport {
  std::vector<TensorGradError> tensors;  // worst over all seeds, checkpoint order
  double max_relative_error = 0.0;
  std::string worst_tag;
  bool passed = false;
};

/// Random (real, fake) pair of n_events each plus random parameters, all
/// derived from seed.
struct GradCheckCase {
  GanParamsd params;
  NoisySequence real;
  NoisySequence fake;
};
GradCheckCase make_gradcheck_case(std::uint64_t seed, const GradCheckOptions& opt = {});

/// Compares the backpropagated gradients of both objectives against central
/// finite differences, for every trainable entry.
GradCheckReport check_gradients(std::uint64_t seed, const GradCheckOptions& opt = {});

}  // namespace nblink::tpp
