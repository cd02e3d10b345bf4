#pragma once

#include <filesystem>
#include <vector>

namespace morpho {

/// Writes a gnuplot script that renders, for each log, a 2x2 figure
/// (position/attitude, velocities/body rates, inputs, tracking error) into
/// `<log stem>.png` beside the script. With several logs an extra figure
/// overlays all horizontal trajectories. Columns are addressed by index.
///
/// Throws IoError naming the first log that does not exist, or when the
/// script cannot be written.
void emit_plot_script(const std::vector<std::filesystem::path>& logs,
                      const std::filesystem::path& out);

}  // namespace morpho
