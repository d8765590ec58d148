#include "nblink/persist/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nblink/persist/atomic_file.hpp"

namespace nblink::persist {

void GanConfig::validate() const {
  auto fail = [](const char* k, const char* what) {
    throw std::invalid_argument(std::string("gan.") + k + " " + what);
  };
  if (hidden < 1) fail("hidden", "must be >= 1");
  if (!(mu >= 0.0)) fail("mu", "must be >= 0");
  if (!(beta > 0.0)) fail("beta", "must be positive");
  if (!(lr > 0.0)) fail("lr", "must be positive");
  if (!(init_scale >= 0.0)) fail("init_scale", "must be >= 0");
  if (!(grad_clip > 0.0)) fail("grad_clip", "must be positive");
  if (!(ogata_window_s > 0.0)) fail("ogata_window_s", "must be positive");
  if (!(seq_window_s > 0.0)) fail("seq_window_s", "must be positive");
}

void RunConfig::validate() const {
  mab.validate();
  gan.validate();
  channel.validate();
  sim.validate();
  if (idle_every < 1) throw std::invalid_argument("dataset.idle_every must be >= 1");
  if (retrain.rho_ms < 1000) throw std::invalid_argument("retrain.rho_ms must be >= 1000");
  if (!(retrain.correlation_threshold >= -1.0 && retrain.correlation_threshold <= 1.0))
    throw std::invalid_argument("retrain.correlation_threshold must be in [-1, 1]");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw std::runtime_error("config key " + key + ": invalid value '" + v + "'");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& v)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  Setter set;
  Getter get;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename Access>
Field field(Access access) {
  Field f;
  f.set = [access](RunConfig& c, const std::string& k, const std::string& v) {
    access(c) = parse_number<T>(k, v);
  };
  f.get = [access](const RunConfig& c) {
    const T v = access(const_cast<RunConfig&>(c));
    if constexpr (std::is_floating_point_v<T>) return fmt(v);
    else return std::to_string(v);
  };
  return f;
}

#define NBLINK_FIELD(T, expr) field<T>([](RunConfig& c) -> T& { return c.expr; })

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> m;
    m["mab.c"] = NBLINK_FIELD(int, mab.c);
    m["mab.d"] = NBLINK_FIELD(double, mab.d);
    m["mab.big_k"] = NBLINK_FIELD(std::size_t, mab.big_k);
    m["mab.delta_db"] = NBLINK_FIELD(double, mab.delta_db);
    m["mab.t_d_ms"] = NBLINK_FIELD(int, mab.t_d_ms);
    m["mab.plr_floor"] = NBLINK_FIELD(double, mab.plr_floor);
    m["mab.table_capacity"] = NBLINK_FIELD(std::size_t, mab.table_capacity);
    m["gan.hidden"] = NBLINK_FIELD(int, gan.hidden);
    m["gan.mu"] = NBLINK_FIELD(double, gan.mu);
    m["gan.beta"] = NBLINK_FIELD(double, gan.beta);
    m["gan.lr"] = NBLINK_FIELD(double, gan.lr);
    m["gan.init_scale"] = NBLINK_FIELD(double, gan.init_scale);
    m["gan.grad_clip"] = NBLINK_FIELD(double, gan.grad_clip);
    m["gan.ogata_window_s"] = NBLINK_FIELD(double, gan.ogata_window_s);
    m["gan.seq_window_s"] = NBLINK_FIELD(double, gan.seq_window_s);
    m["channel.t0_db"] = NBLINK_FIELD(double, channel.t0_db);
    m["channel.slope_db_per_mcs"] = NBLINK_FIELD(double, channel.slope_db_per_mcs);
    m["channel.steepness"] = NBLINK_FIELD(double, channel.steepness);
    m["sim.n_ues"] = NBLINK_FIELD(int, sim.n_ues);
    m["sim.duration_ms"] = NBLINK_FIELD(std::int64_t, sim.duration_ms);
    m["sim.sinr_low_db"] = NBLINK_FIELD(double, sim.sinr_low_db);
    m["sim.sinr_high_db"] = NBLINK_FIELD(double, sim.sinr_high_db);
    m["sim.sinr_step_db"] = NBLINK_FIELD(double, sim.sinr_step_db);
    m["sim.packet_bits"] = NBLINK_FIELD(int, sim.packet_bits);
    m["sim.arrival_rate_per_ue"] = NBLINK_FIELD(double, sim.arrival_rate_per_ue);
    m["sim.ul_fraction"] = NBLINK_FIELD(double, sim.ul_fraction);
    m["sim.tcp_fraction"] = NBLINK_FIELD(double, sim.tcp_fraction);
    m["sim.max_prb"] = NBLINK_FIELD(int, sim.max_prb);
    m["sim.ewma_horizon_sf"] = NBLINK_FIELD(int, sim.ewma_horizon_sf);
    m["dataset.idle_every"] = NBLINK_FIELD(int, idle_every);
    m["retrain.rho_ms"] = NBLINK_FIELD(std::int64_t, retrain.rho_ms);
    m["retrain.correlation_threshold"] = NBLINK_FIELD(double, retrain.correlation_threshold);
    m["retrain.record_threshold"] = NBLINK_FIELD(std::size_t, retrain.record_threshold);

    Field init;
    init.set = [](RunConfig& c, const std::string& k, const std::string& v) {
      if (v == "random") c.sim.initial_sinr_db.reset();
      else c.sim.initial_sinr_db = parse_number<double>(k, v);
    };
    init.get = [](const RunConfig& c) {
      return c.sim.initial_sinr_db ? fmt(*c.sim.initial_sinr_db) : std::string("random");
    };
    m["sim.initial_sinr_db"] = init;
    return m;
  }();
  return table;
}

#undef NBLINK_FIELD

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = fields().find(key);
    if (it == fields().end()) throw std::runtime_error("unknown config key " + key);
    if (seen.count(key))
      throw std::runtime_error("config key " + key + " repeated on line " + std::to_string(line_no));
    seen[key] = line_no;
    it->second.set(cfg, key, value);
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string format_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, f] : fields()) out += key + " = " + f.get(cfg) + "\n";
  return out;
}

}  // namespace nblink::persist
