#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "critlimit/cli/commands.hpp"

namespace cli = critlimit::cli;

int main(int argc, char** argv) {
  CLI::App app{"Limits of critical points of f - t g on a variety as t -> 0"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::RunOptions ro;
  std::string json_out;
  double tol = 0.0, radius = 0.0, bound = 0.0;
  std::uint64_t seed = 0;
  auto* tol_opt = app.add_option("--tol", tol, "Matching tolerance for point multisets")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for every random choice (overrides the problem file)");
  auto* radius_opt = app.add_option("--endgame-radius", radius, "Parameter radius where the endgame takes over");
  auto* bound_opt = app.add_option("--divergence-bound", bound, "Coordinate modulus that counts as divergence");
  app.add_option("--threads", ro.threads, "Path-tracking threads")->check(CLI::PositiveNumber);
  app.add_option("--json-out", json_out, "Also write the report to this file");
  app.add_flag("--multihom", ro.multihom, "Use a two-group linear-product start system for Lagrange systems");
  app.add_flag("--timing", ro.timing, "Add the wall time to the report");
  app.add_option("--degree", ro.degree, "Degree cap of the dual-space computation (milnor)")->check(CLI::PositiveNumber);

  std::string file;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"solve", "Solve the critical system at the problem's t, or at a random t"},
      {"limit", "Limit of the critical points as t -> 0 and the count at infinity"},
      {"verify", "Check the limit against the strata with inferred multiplicities"},
      {"ed", "ED degree, or the ED limit when the problem gives a data point u"},
      {"milnor", "Local multiplicity of the critical points of f at the given points"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->add_option("problem", file, "Problem file (JSON)")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_code::input_error;
  }
  if (*tol_opt) ro.tol = tol;
  if (*seed_opt) ro.seed = seed;
  if (*radius_opt) ro.endgame_radius = radius;
  if (*bound_opt) ro.divergence_bound = bound;

  const auto command = cli::parse_command(app.get_subcommands().front()->get_name());
  cli::RunResult result;
  try {
    result = cli::run(command, cli::load_problem(file), ro);
  } catch (const std::exception& e) {
    result = cli::error_result(command, e);
    std::cerr << "critlimit: " << e.what() << "\n";
  }
  const std::string text = cli::render(result.report);
  std::cout << text;
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    out << text;
    if (!out) {
      std::cerr << "critlimit: cannot write " << json_out << "\n";
      return cli::exit_code::input_error;
    }
  }
  return result.exit_code;
}
