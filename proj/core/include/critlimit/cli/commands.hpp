#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "critlimit/cli/problem.hpp"

namespace critlimit::cli {

enum class Command { Solve, Limit, Verify, Ed, Milnor };

Command parse_command(const std::string& name);
const char* to_string(Command c);

/// Command-line overrides; unset fields fall back to the problem file, then to defaults.
struct RunOptions {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<double> endgame_radius;
  std::optional<double> divergence_bound;
  std::size_t threads = 1;
  bool multihom = false;
  bool timing = false;
  int degree = 20;
};

namespace exit_code {
constexpr int ok = 0;
constexpr int verification_failed = 2;
constexpr int path_failure = 3;
constexpr int input_error = 4;
}  // namespace exit_code

struct RunResult {
  nlohmann::json report;
  int exit_code = exit_code::ok;
};

/// Runs one command. Input errors propagate as InputError; numerical
/// failures propagate as PathBudgetError, GenericityFault or ConvergenceError.
RunResult run(Command command, const Problem& problem, const RunOptions& options);

/// Maps an exception from run() to an exit code and an error report.
RunResult error_result(Command command, const std::exception& e);

/// Report text: two-space indented JSON with a trailing newline.
std::string render(const nlohmann::json& report);

}  // namespace critlimit::cli
