#include "nblink/persist/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "nblink/persist/atomic_file.hpp"

namespace nblink::persist {

namespace {

void append_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out += buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> f;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    f.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return f;
}

double field(const std::string& s, std::size_t line_no, const char* name) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("dataset line " + std::to_string(line_no) + ": bad " + name +
                             " '" + s + "'");
  return v;
}

}  // namespace

std::string format_dataset(const std::vector<DatasetRecord>& records) {
  std::string out = kDatasetHeader;
  out += '\n';
  for (const auto& r : records) {
    append_num(out, r.t_ms);
    out += ',';
    out += direction_code(r.direction);
    out += ',';
    out += r.alpha ? '1' : '0';
    for (double v : {r.gamma, r.m_norm, r.r_norm, r.sinr_db, r.plr}) {
      out += ',';
      append_num(out, v);
    }
    out += '\n';
  }
  return out;
}

std::vector<DatasetRecord> parse_dataset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kDatasetHeader)
    throw std::runtime_error("dataset: header must be exactly '" + std::string(kDatasetHeader) + "'");
  std::vector<DatasetRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    const std::string where = "dataset line " + std::to_string(line_no) + ": ";
    if (f.size() != 8) throw std::runtime_error(where + "expected 8 fields");
    DatasetRecord r;
    r.t_ms = field(f[0], line_no, "t_ms");
    if (f[1].size() != 1 || (f[1][0] != 'U' && f[1][0] != 'D'))
      throw std::runtime_error(where + "dir must be U or D");
    r.direction = direction_from_code(f[1][0]);
    if (f[2] != "0" && f[2] != "1") throw std::runtime_error(where + "alpha must be 0 or 1");
    r.alpha = f[2] == "1" ? 1 : 0;
    r.gamma = field(f[3], line_no, "prb_norm");
    r.m_norm = field(f[4], line_no, "mcs_norm");
    r.r_norm = field(f[5], line_no, "rep_norm");
    r.sinr_db = field(f[6], line_no, "sinr_db");
    r.plr = field(f[7], line_no, "plr");
    if (r.alpha == 0 && (r.gamma != 0.0 || r.m_norm != 0.0 || r.r_norm != 0.0))
      throw std::runtime_error(where + "unscheduled record carries nonzero marks");
    if (!r.valid()) throw std::runtime_error(where + "field out of range");
    out.push_back(r);
  }
  return out;
}

void save_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  write_file_atomic(path, format_dataset(records));
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_file(path));
}

}  // namespace nblink::persist
