#include "morpho/plot_script.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "morpho/errors.hpp"
#include "morpho/log_io.hpp"

namespace morpho {

namespace {

// 1-based, as gnuplot counts.
int col(const std::string& name) {
  const auto& cols = log_columns();
  const auto it = std::find(cols.begin(), cols.end(), name);
  if (it == cols.end()) throw Error("no log column " + name);
  return static_cast<int>(it - cols.begin()) + 1;
}

std::string quoted(const std::filesystem::path& p) {
  std::string s = p.generic_string();
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "''";
    else out += c;
  }
  return out + "'";
}

std::string series(const std::string& file, const std::string& column, const char* title,
                   bool degrees = false, bool first = false) {
  std::ostringstream s;
  s << (first ? file : "''") << " using 1:";
  if (degrees) {
    s << "($" << col(column) << "*180/pi)";
  } else {
    s << col(column);
  }
  s << " with lines title '" << title << "'";
  return s.str();
}

void panels(std::ostream& out, const std::filesystem::path& log) {
  const std::string f = quoted(log);
  out << "\n# " << log.generic_string() << "\n";
  out << "set output " << quoted(log.stem().string() + ".png") << "\n";
  out << "set multiplot layout 2,2 title " << quoted(log.stem()) << "\n";

  out << "set title 'position (m) / attitude (deg)'\nset ylabel 'm'\nset y2label 'deg'\n"
         "set ytics nomirror\nset y2tics\n";
  out << "plot " << series(f, "x", "x", false, true) << ", \\\n  "
      << series(f, "y", "y") << ", \\\n  " << series(f, "z", "z") << ", \\\n  "
      << series(f, "roll", "roll", true) << " axes x1y2, \\\n  "
      << series(f, "pitch", "pitch", true) << " axes x1y2, \\\n  "
      << series(f, "yaw", "yaw", true) << " axes x1y2\n";

  out << "set title 'velocity (m/s) / body rates (deg/s)'\nset ylabel 'm/s'\n"
         "set y2label 'deg/s'\n";
  out << "plot " << series(f, "vx", "vx", false, true) << ", \\\n  "
      << series(f, "vy", "vy") << ", \\\n  " << series(f, "vz", "vz") << ", \\\n  "
      << series(f, "wx", "p", true) << " axes x1y2, \\\n  "
      << series(f, "wy", "q", true) << " axes x1y2, \\\n  "
      << series(f, "wz", "r", true) << " axes x1y2\n";

  out << "set title 'thrust (N) / sagittal joint accel (rad/s^2)'\nset ylabel 'N'\n"
         "set y2label 'rad/s^2'\n";
  out << "plot " << series(f, "thrust_act1", "T1", false, true);
  for (int i = 2; i <= 4; ++i) {
    const std::string n = std::to_string(i);
    out << ", \\\n  " << series(f, "thrust_act" + n, ("T" + n).c_str());
  }
  for (int i = 1; i <= 4; ++i) {
    const std::string n = std::to_string(i);
    out << ", \\\n  " << series(f, "qdd_sag" + n, ("qdd_sag" + n).c_str())
        << " axes x1y2";
  }
  out << "\n";

  out << "set title 'tracking error (m)'\nset ylabel 'm'\nunset y2label\nunset y2tics\n"
         "set ytics mirror\n";
  out << "plot " << series(f, "tracking_error", "error", false, true) << "\n";
  out << "unset multiplot\n";
}

}  // namespace

void emit_plot_script(const std::vector<std::filesystem::path>& logs,
                      const std::filesystem::path& out_path) {
  for (const auto& log : logs) {
    if (!std::filesystem::exists(log)) throw IoError("log not found: " + log.string());
  }
  std::ostringstream out;
  out << "# gnuplot script for morphonmpc logs; run: gnuplot " << out_path.filename().string()
      << "\n";
  out << "set datafile separator ','\nset datafile commentschars '#'\n"
         "set key autotitle columnhead\nset terminal pngcairo size 1400,900\n"
         "set xlabel 't (s)'\nset grid\n";
  for (const auto& log : logs) panels(out, log);

  if (logs.size() > 1) {
    out << "\n# overlaid trajectories\n";
    out << "set output 'trajectories.png'\nset title 'horizontal trajectory (m)'\n"
           "set xlabel 'x (m)'\nset ylabel 'y (m)'\nunset y2tics\nset size ratio -1\n";
    out << "plot ";
    for (std::size_t i = 0; i < logs.size(); ++i) {
      out << (i ? ", \\\n  " : "") << quoted(logs[i]) << " using " << col("x") << ":"
          << col("y") << " with lines title " << quoted(logs[i].stem());
    }
    out << "\n";
  }
  out << "unset output\n";

  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + out_path.string() + " for writing");
  file << out.str();
  file.flush();
  if (!file) throw IoError("write failed: " + out_path.string());
}

}  // namespace morpho
