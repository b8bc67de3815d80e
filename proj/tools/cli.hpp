#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace transel::cli {

/// Reads one numeric column (header name or 0-based index) from a CSV file. Empty,
/// "NA" and "NaN" cells are dropped; their count is written to `log`.
/// Throws ParseError naming the row of a bad cell, EmptyColumn when nothing is left.
std::vector<double> ingest_csv(const std::filesystem::path& path, const std::string& column, std::ostream& log);

/// Entry point shared by the binary and the tests. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace transel::cli
