#pragma once

#include <iosfwd>

#include "eventclock/cli/config.hpp"
#include "eventclock/cli/table.hpp"

namespace eventclock::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the mapped library computation; throws NumericalError on a failed
/// certification.
Table execute(const RunConfig& config);

/// execute() plus atomic output. Returns an exit code and reports failures on `err`.
int run(const RunConfig& config, std::ostream& err);

/// Full command-line entry point: `eventclock <experiment> --config <path>
/// [--out <path>] [--format csv|json]`.
int main_entry(int argc, char** argv);

}  // namespace eventclock::cli
