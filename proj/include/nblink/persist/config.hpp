#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nblink/link_model.hpp"
#include "nblink/mab_engine.hpp"
#include "nblink/retrain.hpp"
#include "nblink/simulator.hpp"

namespace nblink::persist {

struct GanConfig {
  int hidden = 32;
  double mu = 1.0;
  double beta = 2.0;
  double lr = 1e-3;
  double init_scale = 0.1;
  double grad_clip = 5.0;
  double ogata_window_s = 1.0;
  double seq_window_s = 10.0;  // training sequence length

  void validate() const;
};

struct RunConfig {
  MabParams mab;
  GanConfig gan;
  ChannelModelParams channel;
  SimConfig sim;
  int idle_every = 10;
  RetrainOptions retrain;

  void validate() const;
};

/// Flat "key = value" text with dotted keys and '#' comments. Unknown keys,
/// malformed numbers and out-of-range values raise std::runtime_error
/// naming the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Every key with its current value, in parseable form.
std::string format_config(const RunConfig& cfg);

}  // namespace nblink::persist
