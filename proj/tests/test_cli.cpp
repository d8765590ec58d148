#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "nblink/persist/atomic_file.hpp"
#include "nblink/persist/checkpoint.hpp"
#include "nblink/tpp_gan/params.hpp"

using namespace nblink;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int st = nblink::cli::run(args, out, err);
  return {st, out.str(), err.str()};
}

fs::path dir() {
  const fs::path d = fs::temp_directory_path() / "nblink_cli_test";
  fs::create_directories(d);
  return d;
}

std::string write_cfg(const std::string& name, const std::string& text) {
  const auto p = dir() / name;
  persist::write_file_atomic(p, text);
  return p.string();
}

const char* kSmall =
    "sim.n_ues = 4\n"
    "sim.duration_ms = 3000\n"
    "sim.arrival_rate_per_ue = 10\n"
    "gan.hidden = 4\n"
    "gan.seq_window_s = 1\n";

}  // namespace

TEST_CASE("eval with zero traffic writes a zero-throughput row") {
  const auto cfg = write_cfg("zero.cfg", "sim.arrival_rate_per_ue = 0\nsim.duration_ms = 1000\n");
  const auto out = (dir() / "zero.csv").string();
  const auto r = invoke({"eval", "--config", cfg, "--policy", "static", "--out", out, "--seed", "3"});
  CHECK(r.status == 0);
  const std::string csv = persist::read_file(out);
  CHECK(csv.find("\nstatic,10,3,0,0,0,,,0,\n") != std::string::npos);
}

TEST_CASE("train with zero epochs writes the seeded initialization") {
  const auto cfg = write_cfg("small.cfg", kSmall);
  const auto data = (dir() / "d0.csv").string();
  const auto model = (dir() / "m0.ckpt").string();
  REQUIRE(invoke({"gen-dataset", "--config", cfg, "--out", data, "--episodes", "1", "--seed", "2"}).status == 0);
  REQUIRE(invoke({"train", "--config", cfg, "--dataset", data, "--out", model, "--epochs", "0",
               "--seed", "9"}).status == 0);
  const auto init = tpp::initialize<double>(4, 1.0, 2.0, 0.1, 9);
  CHECK(persist::read_file(model) == persist::format_checkpoint(init));
}

TEST_CASE("full pipeline is byte-reproducible") {
  const auto cfg = write_cfg("small.cfg", kSmall);
  std::string files[2][5];
  for (int k = 0; k < 2; ++k) {
    const std::string tag = std::to_string(k);
    const auto data = (dir() / ("d" + tag + ".csv")).string();
    const auto model = (dir() / ("m" + tag + ".ckpt")).string();
    const auto m_static = (dir() / ("s" + tag + ".csv")).string();
    const auto m_smart = (dir() / ("g" + tag + ".csv")).string();
    const auto m_sweep = (dir() / ("w" + tag + ".csv")).string();
    REQUIRE(invoke({"gen-dataset", "--config", cfg, "--out", data, "--episodes", "2", "--seed", "5"}).status == 0);
    REQUIRE(invoke({"train", "--config", cfg, "--dataset", data, "--out", model, "--epochs", "2",
                 "--seed", "5"}).status == 0);
    REQUIRE(invoke({"eval", "--config", cfg, "--policy", "static", "--out", m_static, "--seed", "5"}).status == 0);
    REQUIRE(invoke({"eval", "--config", cfg, "--policy", "smartcon", "--model", model, "--dataset",
                 data, "--out", m_smart, "--seed", "5"}).status == 0);
    REQUIRE(invoke({"sweep", "--config", cfg, "--policy", "mab", "--ues", "2..6", "--step", "2",
                 "--out", m_sweep, "--seed", "5"}).status == 0);
    int i = 0;
    for (const auto& f : {data, model, m_static, m_smart, m_sweep}) files[k][i++] = persist::read_file(f);
  }
  for (int i = 0; i < 5; ++i) CHECK(files[0][i] == files[1][i]);
  // smartcon row carries a MAPE value; sweep has one row per UE count.
  CHECK(files[0][3].back() == '\n');
  CHECK(files[0][3].substr(files[0][3].rfind(',', files[0][3].size() - 2) + 1) != "\n");
  CHECK(std::count(files[0][4].begin(), files[0][4].end(), '\n') == 4);
}

TEST_CASE("errors exit nonzero with one diagnostic line and no output") {
  const auto out = (dir() / "never.csv").string();
  fs::remove(out);
  auto one_line = [](const Run& r) {
    return r.status != 0 && !r.err.empty() &&
           std::count(r.err.begin(), r.err.end(), '\n') == 1;
  };
  CHECK(one_line(invoke({"eval", "--policy", "static", "--out", out, "--bogus"})));
  CHECK(one_line(invoke({"eval", "--policy", "smartcon", "--out", out})));
  CHECK(one_line(invoke({"eval", "--policy", "oracle", "--out", out})));
  CHECK(one_line(invoke({"eval", "--config", "/nonexistent.cfg", "--policy", "static", "--out", out})));
  const auto bad = write_cfg("bad.cfg", "mab.c = 0\n");
  const auto r = invoke({"eval", "--config", bad, "--policy", "static", "--out", out});
  CHECK(one_line(r));
  CHECK(r.err.find("mab.c") != std::string::npos);
  const auto wrong = write_cfg("h8.cfg", "gan.hidden = 8\n");
  const auto model = (dir() / "h2.ckpt").string();
  persist::save_checkpoint(model, tpp::initialize<double>(2, 1.0, 2.0, 0.1, 1));
  CHECK(one_line(invoke({"eval", "--config", wrong, "--policy", "smartcon", "--model", model, "--out", out})));
  CHECK(one_line(invoke({})));
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("check-grads passes") {
  const auto r = invoke({"check-grads", "--seed", "1"});
  CHECK(r.status == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
}
