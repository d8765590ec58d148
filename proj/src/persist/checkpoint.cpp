#include "nblink/persist/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nblink/persist/atomic_file.hpp"

namespace nblink::persist {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(const std::string& what) {
  throw std::runtime_error("checkpoint: " + what);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad("bad number '" + s + "'");
  return v;
}

long parse_long(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad("bad integer '" + s + "'");
  return v;
}

std::string after_prefix(const std::string& field, const std::string& prefix) {
  if (field.rfind(prefix, 0) != 0) bad("expected '" + prefix + "' in header");
  return field.substr(prefix.size());
}

}  // namespace

std::string format_checkpoint(const tpp::GanParamsd& p) {
  if (!tpp::all_finite(p)) throw std::invalid_argument("checkpoint: parameters are not finite");
  std::string out = kCheckpointMagic;
  out += "\nH=" + std::to_string(p.hidden()) + " mu=" + num(p.gen.noise_mean) +
         " beta=" + num(p.gen.mark_rate) + "\n";
  auto tensor = [&](std::string_view tag, const auto& m) {
    out += std::string(tag) + " " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) +
           "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out += ' ';
        out += num(m(r, c));
      }
      out += '\n';
    }
  };
  tpp::visit_trainable(p.gen, tensor);
  tpp::visit_trainable(p.disc, tensor);
  return out;
}

tpp::GanParamsd parse_checkpoint(const std::string& text,
                                 std::optional<Eigen::Index> expected_hidden) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointMagic)
    bad("missing or unsupported version tag");
  if (!std::getline(in, line)) bad("truncated header");
  std::istringstream hs(line);
  std::string fh, fmu, fbeta, extra;
  if (!(hs >> fh >> fmu >> fbeta) || (hs >> extra)) bad("malformed header line");
  const long h = parse_long(after_prefix(fh, "H="));
  if (h < 1) bad("hidden width must be >= 1");
  if (expected_hidden && h != *expected_hidden)
    bad("hidden width " + std::to_string(h) + " does not match configured " +
        std::to_string(*expected_hidden));
  const double mu = parse_double(after_prefix(fmu, "mu="));
  const double beta = parse_double(after_prefix(fbeta, "beta="));
  if (!(mu >= 0.0)) bad("mu must be >= 0");
  if (!(beta > 0.0)) bad("beta must be positive");

  auto p = tpp::GanParamsd::zeros(h, mu, beta);
  auto read_tensor = [&](std::string_view tag, auto m) {
    if (!std::getline(in, line)) bad("truncated before tensor " + std::string(tag));
    std::istringstream ts(line);
    std::string name, rows, cols;
    if (!(ts >> name >> rows >> cols) || (ts >> extra)) bad("malformed tensor header '" + line + "'");
    if (name != tag) bad("expected tensor " + std::string(tag) + ", found " + name);
    if (parse_long(rows) != m.rows() || parse_long(cols) != m.cols())
      bad("dimension mismatch for " + name);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (!std::getline(in, line)) bad("truncated inside tensor " + name);
      std::istringstream rs(line);
      std::string v;
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (!(rs >> v)) bad("short row in tensor " + name);
        m(r, c) = parse_double(v);
      }
      if (rs >> v) bad("long row in tensor " + name);
    }
  };
  tpp::visit_trainable(p.gen, read_tensor);
  tpp::visit_trainable(p.disc, read_tensor);
  while (std::getline(in, line))
    if (!line.empty()) bad("trailing content after last tensor");
  if (!tpp::all_finite(p)) bad("non-finite value");
  return p;
}

void save_checkpoint(const std::filesystem::path& path, const tpp::GanParamsd& p) {
  write_file_atomic(path, format_checkpoint(p));
}

tpp::GanParamsd load_checkpoint(const std::filesystem::path& path,
                                std::optional<Eigen::Index> expected_hidden) {
  return parse_checkpoint(read_file(path), expected_hidden);
}

}  // namespace nblink::persist
