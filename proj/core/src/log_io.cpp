#include "morpho/log_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "morpho/errors.hpp"

namespace morpho {

namespace {

std::vector<std::string> state_names(const std::string& prefix) {
  std::vector<std::string> n;
  for (const char* s : {"x", "y", "z", "roll", "pitch", "yaw"}) n.push_back(prefix + s);
  for (const char* group : {"q_sag", "q_front"}) {
    for (int i = 1; i <= 4; ++i) n.push_back(prefix + group + std::to_string(i));
  }
  for (const char* s : {"vx", "vy", "vz", "wx", "wy", "wz"}) n.push_back(prefix + s);
  for (const char* group : {"qd_sag", "qd_front"}) {
    for (int i = 1; i <= 4; ++i) n.push_back(prefix + group + std::to_string(i));
  }
  return n;
}

std::vector<std::string> build_columns() {
  std::vector<std::string> c{"time"};
  for (auto& s : state_names("")) c.push_back(s);
  for (const char* group : {"thrust_cmd", "thrust_act", "qdd_sag", "qdd_front"}) {
    for (int i = 1; i <= 4; ++i) c.push_back(group + std::to_string(i));
  }
  for (auto& s : state_names("ref_")) c.push_back(s);
  for (int i = 1; i <= 4; ++i) c.push_back("eta" + std::to_string(i));
  for (const char* s : {"cost", "iterations", "converged", "tracking_error", "waypoint",
                        "dist_fx", "dist_fy", "dist_fz", "dist_tx", "dist_ty", "dist_tz"}) {
    c.push_back(s);
  }
  return c;
}

void put(std::string& line, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.9g", v);
  line += ',';
  line.append(buf, static_cast<std::size_t>(n));
}

void put(std::string& line, long v) {
  line += ',';
  line += std::to_string(v);
}

template <typename Vec>
void put_all(std::string& line, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) put(line, v[i]);
}

std::string format_row(const LogRow& r) {
  std::string line;
  char buf[32];
  line.append(buf, static_cast<std::size_t>(std::snprintf(buf, sizeof(buf), "%.9g", r.time)));
  put_all(line, r.state);
  put_all(line, r.thrust_commanded);
  put_all(line, r.thrust_actual);
  put_all(line, r.joint_accel);
  put_all(line, r.reference);
  put_all(line, r.effectiveness);
  put(line, r.cost);
  put(line, static_cast<long>(r.iterations));
  put(line, static_cast<long>(r.converged ? 1 : 0));
  put(line, r.tracking_error);
  put(line, static_cast<long>(r.waypoint_index));
  put_all(line, r.disturbance);
  line += '\n';
  return line;
}

std::vector<double> split_numbers(const std::string& line, const std::string& where) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(',', start);
    if (end == std::string::npos) end = line.size();
    double x = 0.0;
    const char* b = line.data() + start;
    const char* e = line.data() + end;
    const auto res = std::from_chars(b, e, x);
    if (res.ec != std::errc() || res.ptr != e) {
      throw IoError(where + ": malformed number '" + std::string(b, e) + "'");
    }
    v.push_back(x);
    start = end + 1;
  }
  return v;
}

}  // namespace

const std::vector<std::string>& log_columns() {
  static const std::vector<std::string> columns = build_columns();
  return columns;
}

void write_csv(const SimLog& log, std::ostream& out) {
  out << kLogVersionLine << '\n';
  const auto& cols = log_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const LogRow& r : log.rows) out << format_row(r);
}

void write_csv(const SimLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(log, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

SimLog read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  SimLog log;
  log.scenario = path.stem().string();
  const auto& cols = log_columns();
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (!header_seen) {
      std::string expected;
      for (std::size_t i = 0; i < cols.size(); ++i) expected += (i ? "," : "") + cols[i];
      if (line != expected) throw IoError(where + ": unexpected header");
      header_seen = true;
      continue;
    }
    const std::vector<double> v = split_numbers(line, where);
    if (v.size() != cols.size()) {
      throw IoError(where + ": expected " + std::to_string(cols.size()) + " columns");
    }
    LogRow r;
    std::size_t k = 0;
    auto take = [&](auto& vec) {
      for (Eigen::Index i = 0; i < vec.size(); ++i) vec[i] = v[k++];
    };
    r.time = v[k++];
    take(r.state);
    take(r.thrust_commanded);
    take(r.thrust_actual);
    take(r.joint_accel);
    take(r.reference);
    take(r.effectiveness);
    r.cost = v[k++];
    r.iterations = static_cast<int>(v[k++]);
    r.converged = v[k++] != 0.0;
    r.tracking_error = v[k++];
    r.waypoint_index = static_cast<int>(v[k++]);
    take(r.disturbance);
    log.rows.push_back(r);
  }
  if (!header_seen) throw IoError(path.string() + ": missing header row");
  if (log.rows.size() >= 2) log.control_period = log.rows[1].time - log.rows[0].time;
  return log;
}

}  // namespace morpho
