#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eventclock/cli/config.hpp"

namespace eventclock::cli {

/// Result of one experiment: fixed column order, one unit label per column.
struct Table {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;
};

/// 12 significant digits, '.' separator, independent of the global locale.
std::string format_number(double value);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// Writes to a sibling temporary file and renames it over `path` on success,
/// so a failed run never leaves a partial output behind.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

/// Inverse of to_csv (header line, then numeric rows).
Table parse_csv(const std::string& text);

}  // namespace eventclock::cli
