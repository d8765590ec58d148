#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nblink/simulator.hpp"

namespace nblink::persist {

inline constexpr const char* kMetricsHeader =
    "policy,n_ues,seed,throughput_bps,avg_plr,avg_delay_ms,p50_delay_ms,p95_delay_ms,"
    "consumed_subframes,mape_avg";

/// One row per report; delay quantiles and mape_avg are empty when undefined.
std::string format_metrics(const std::vector<MetricsReport>& reports);
void save_metrics(const std::filesystem::path& path, const std::vector<MetricsReport>& reports);

}  // namespace nblink::persist
