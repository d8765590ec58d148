#include "nblink/persist/metrics_io.hpp"

#include <cstdio>

#include "nblink/metrics.hpp"
#include "nblink/persist/atomic_file.hpp"

namespace nblink::persist {

namespace {
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
}  // namespace

std::string format_metrics(const std::vector<MetricsReport>& reports) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (const auto& r : reports) {
    std::string p50, p95;
    if (!r.delay_cdf.empty()) {
      const EmpiricalCdf cdf(r.delay_cdf);
      p50 = num(cdf.quantile(0.5));
      p95 = num(cdf.quantile(0.95));
    }
    out += r.policy + ',' + std::to_string(r.n_ues) + ',' + std::to_string(r.seed) + ',' +
           num(r.throughput_bps) + ',' + num(r.avg_plr) + ',' + num(r.avg_delay_ms) + ',' + p50 +
           ',' + p95 + ',' + std::to_string(r.consumed_subframes) + ',' +
           (r.mape_avg ? num(*r.mape_avg) : std::string()) + '\n';
  }
  return out;
}

void save_metrics(const std::filesystem::path& path, const std::vector<MetricsReport>& reports) {
  write_file_atomic(path, format_metrics(reports));
}

}  // namespace nblink::persist
