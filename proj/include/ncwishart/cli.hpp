#pragma once

// Command dispatch behind the ncwishart executable. Argument parsing lives in
// tools/; run() is callable directly from tests.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ncwishart/process.hpp"

namespace ncwishart::cli {

enum class Command { Validate, Laplace, Sample, Simulate, Verify, Convert, Riccati };
enum class Format { Csv, Json };

enum ExitCode : int {
  kSuccess = 0,
  kInvalidInput = 1,
  kNotExists = 2,
  kNumericalFailure = 3,
  kOpenProblem = 4,
};

// "COUNT:S1,S2,..." e.g. "10:0.1,1,10" = 10 random directions at 3 scales.
struct GridSpec {
  int directions = 10;
  std::vector<double> scales;

  static GridSpec parse(const std::string& text);
  std::string to_string() const;
};

struct RunConfig {
  Command command = Command::Validate;
  std::string input;
  std::string output;        // empty: stdout (not allowed for sample/simulate)
  std::uint64_t seed = 0;    // 0: draw from entropy, recorded in metadata
  std::size_t n = 10000;
  std::optional<GridSpec> grid;  // per-command default when absent
  int steps = 400;
  double t = 1.0;
  Format format = Format::Csv;
  bool allow_open = false;
  std::optional<ProcessMode> mode;
  std::string to = "gamma";  // convert target: gamma | letac
};

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);

// Executes one command; diagnostics go to `log`.
int run(const RunConfig& config, std::ostream& log);

}  // namespace ncwishart::cli
