#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "morpho/harness.hpp"

namespace morpho {

/// First line of every log file.
inline constexpr const char* kLogVersionLine = "# morphonmpc-log v1";

/// Column names in file order. Frozen for format v1.
const std::vector<std::string>& log_columns();

/// Version comment, header row, then one row per sample with 9 significant
/// digits. Wall-clock solve time is not written so identical runs give
/// identical bytes.
void write_csv(const SimLog& log, std::ostream& out);
/// Throws IoError when the file cannot be written.
void write_csv(const SimLog& log, const std::filesystem::path& path);

/// Reads a v1 log back. Throws IoError on unreadable files or malformed rows.
SimLog read_csv(const std::filesystem::path& path);

}  // namespace morpho
