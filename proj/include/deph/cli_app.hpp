#pragma once

// Command-line front end: configuration, validation and the table-emitting
// runner behind the `deph` binary. Split from main() so tests can drive it
// in-process.

#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "deph/numerics.hpp"

namespace deph::cli {

struct RangeSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  bool log = false;
};

/// Parses "min:max:count" with an optional "log:" prefix for log spacing.
RangeSpec parse_range(const std::string& text);
std::vector<double> expand_range(const RangeSpec& range);

struct RunConfig {
  std::string command;  // rate | factor | scrit | convexity | discord | landscape |
                        // frozen-region | backflow
  double s = std::numeric_limits<double>::quiet_NaN();
  std::string tab_path;  // tabulated-spectrum CSV; overrides s when set
  double temperature = 0.0;
  double c = std::numeric_limits<double>::quiet_NaN();
  std::optional<RangeSpec> t_grid;
  std::optional<RangeSpec> s_grid;
  std::optional<RangeSpec> c_grid;
  std::vector<double> temperatures;  // scrit
  double t_max = 100.0;
  int n_grid = 2000;
  bool find_threshold = false;  // convexity: report the threshold s* instead of verdicts
  Bracket omega_range{1e-4, 50.0};
  QuadratureSpec quad;
  std::string output_format = "csv";  // csv | json
  std::string output_path = "-";      // "-" means standard output
  double omega_c_scale = 1.0;         // physical cutoff for unit conversion on output
  int threads = 1;
};

/// Returns every violation found, not just the first; empty means runnable.
std::vector<std::string> validate(const RunConfig& config);

// Exit codes: 0 success, 2 parse/validation, 3 numerical, 4 I/O.
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

/// Executes the configured command and emits one table (plus a meta JSON
/// block). out overrides the configured destination when non-null.
int run(const RunConfig& config, std::ostream* out = nullptr);

/// Full argv entry point used by the binary.
int cli_main(int argc, const char* const* argv);

}  // namespace deph::cli
