#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nblink/dataset.hpp"
#include "nblink/metrics.hpp"
#include "nblink/persist/config.hpp"
#include "nblink/policies.hpp"
#include "nblink/simulator.hpp"
#include "nblink/tpp_gan/trainer.hpp"

namespace nblink {

enum class PolicyKind { static_fifo, threshold, mab, smartcon };

/// "static", "threshold", "mab" or "smartcon"; throws std::invalid_argument.
PolicyKind parse_policy(const std::string& name);

std::vector<DatasetRecord> run_gen_dataset(const persist::RunConfig& cfg, std::size_t episodes,
                                           std::uint64_t seed);

tpp::TrainOptions train_options(const persist::RunConfig& cfg, std::size_t epochs,
                                std::uint64_t seed);

/// Training windows cut from a dataset.
std::vector<tpp::Sequence> training_sequences(const persist::RunConfig& cfg,
                                              std::span<const DatasetRecord> records);

tpp::TrainResult run_train(const persist::RunConfig& cfg, std::span<const DatasetRecord> records,
                           std::size_t epochs, std::uint64_t seed);

/// Per-quantity MAPE of one-step generator predictions along the dataset,
/// with the true history fed back (PRB count, MCS, repetitions, and the
/// scheduling probability against the scheduling status).
struct TeacherForcedMape {
  MapeResult prb, mcs, rep, schedule;
  std::optional<double> average() const;
};
TeacherForcedMape teacher_forced_mape(const tpp::GanParamsd& model,
                                      std::span<const DatasetRecord> records,
                                      const persist::RunConfig& cfg, std::uint64_t seed);

std::unique_ptr<Policy> make_policy(PolicyKind kind, const persist::RunConfig& cfg,
                                    const tpp::GanParamsd* model,
                                    std::span<const DatasetRecord> training, std::uint64_t seed);

/// One closed-loop run. smartcon requires a model; mape_avg is filled when
/// both a model and a dataset are given.
MetricsReport run_eval(const persist::RunConfig& cfg, PolicyKind kind,
                       const tpp::GanParamsd* model, std::span<const DatasetRecord> dataset,
                       std::uint64_t seed);

}  // namespace nblink
