#include <catch2/catch_test_macros.hpp>

#include "critlimit/cli/commands.hpp"
#include "oracles.hpp"

using namespace critlimit;
using nlohmann::json;

namespace {

cli::Problem from(const char* text) { return cli::parse_problem(json::parse(text)); }

cli::Problem corpus(const std::string& name) {
  return cli::load_problem(std::string(CRITLIMIT_PROBLEM_DIR) + "/" + name + ".json");
}

Complex as_complex(const json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

}  // namespace

TEST_CASE("command names", "[commands]") {
  for (auto c : {cli::Command::Solve, cli::Command::Limit, cli::Command::Verify, cli::Command::Ed, cli::Command::Milnor})
    CHECK(cli::parse_command(cli::to_string(c)) == c);
  CHECK_THROWS_AS(cli::parse_command("plot"), InputError);
}

TEST_CASE("solve at t = 1 returns the three critical points of f - g", "[commands]") {
  auto p = corpus("sec5_1_univariate");
  p.t = 1.0;
  const auto r = cli::run(cli::Command::Solve, p, {});
  CHECK(r.exit_code == cli::exit_code::ok);
  const auto& sols = r.report["result"]["solutions"];
  REQUIRE(sols.size() == 3);
  // Oracle: roots of 4x^3 - 12x^2 - 1.
  for (const auto& root : oracle::companion_roots({-1.0, 0.0, -12.0, 4.0})) {
    bool hit = false;
    for (const auto& s : sols) hit = hit || std::abs(as_complex(s[0]) - root) < 1e-9;
    CHECK(hit);
  }
}

TEST_CASE("solve counts", "[commands]") {
  auto ell = corpus("sec5_2_elliptic");
  ell.t = 1.0;
  CHECK(cli::run(cli::Command::Solve, ell, {}).report["result"]["solutions"].size() == 4);

  auto circle = corpus("ex5_4_circle");
  circle.u = std::vector<Complex>{{0.3, 0.1}, {-0.8, 0.4}};
  CHECK(cli::run(cli::Command::Solve, circle, {}).report["result"]["solutions"].size() == 2);
}

TEST_CASE("limit report content", "[commands]") {
  const auto r = cli::run(cli::Command::Limit, corpus("sec5_1_univariate"), {});
  const auto& res = r.report["result"];
  CHECK(r.report["command"] == "limit");
  CHECK(res["cardinality"] == 3);
  CHECK(res["infinity_count"] == 0);
  CHECK(res["conservation_ok"] == true);
  REQUIRE(res["limit"]["atoms"].size() == 2);
  // Atoms come in canonical order: 0 then 3.
  CHECK(res["limit"]["atoms"][0]["multiplicity"] == 2);
  CHECK(std::abs(as_complex(res["limit"]["atoms"][1]["point"][0]) - 3.0) < 1e-8);
  CHECK(r.report.find("wall_time_s") == r.report.end());
}

TEST_CASE("every default is materialized in the config", "[commands]") {
  const auto r = cli::run(cli::Command::Limit, corpus("sec5_1_univariate"), {});
  const auto& cfg = r.report["config"];
  for (const char* key : {"tol", "cluster_radius", "membership_tol", "seed", "threads", "multihom", "failure_budget",
                          "final_tol", "singular_tol", "duplicate_tol", "degree"})
    CHECK(cfg.contains(key));
  CHECK(cfg["endgame"]["r0"] == 0.1);
  CHECK(cfg["endgame"]["divergence_bound"] == 1e8);
  CHECK(cfg["tracker"]["path_tol"] == 1e-9);
}

TEST_CASE("command-line overrides take precedence", "[commands]") {
  cli::RunOptions ro;
  ro.tol = 1e-7;
  ro.seed = 99;
  ro.endgame_radius = 0.05;
  ro.divergence_bound = 1e9;
  ro.timing = true;
  const auto r = cli::run(cli::Command::Limit, corpus("sec5_1_univariate"), ro);
  const auto& cfg = r.report["config"];
  CHECK(cfg["tol"] == 1e-7);
  CHECK(cfg["seed"] == 99);
  CHECK(cfg["endgame"]["r0"] == 0.05);
  CHECK(cfg["endgame"]["divergence_bound"] == 1e9);
  CHECK(r.report.contains("wall_time_s"));
  CHECK(r.report["result"]["cardinality"] == 3);
}

TEST_CASE("a false stratification fails verification with exit code 2", "[commands]") {
  // The double point at 0 is missing from the strata.
  const auto p = from(R"({"variables": ["x"], "f": "x^4 - 4*x^3", "g": "x",
                          "strata": [{"name": "three", "ideal": ["x - 3"]}]})");
  const auto r = cli::run(cli::Command::Verify, p, {});
  CHECK(r.exit_code == cli::exit_code::verification_failed);
  CHECK(r.report["result"]["theorem_verified"] == false);
  CHECK_FALSE(r.report["result"]["problems"].empty());
}

TEST_CASE("input errors", "[commands]") {
  // Random g without a seed.
  CHECK_THROWS_AS(cli::run(cli::Command::Limit, from(R"({"variables": ["x"], "f": "x^2", "g": "random"})"), {}),
                  InputError);
  // No objective.
  CHECK_THROWS_AS(cli::run(cli::Command::Limit, from(R"({"variables": ["x"], "g": "x"})"), {}), InputError);
  // Verify without strata.
  CHECK_THROWS_AS(cli::run(cli::Command::Verify, from(R"({"variables": ["x"], "f": "x^2", "g": "x"})"), {}),
                  InputError);
  // Nonlinear g.
  CHECK_THROWS_AS(cli::run(cli::Command::Limit, from(R"({"variables": ["x"], "f": "x^2", "g": "x^2"})"), {}),
                  InputError);
  // Endgame radius outside (0, 0.5).
  cli::RunOptions ro;
  ro.endgame_radius = 0.7;
  CHECK_THROWS_AS(cli::run(cli::Command::Limit, corpus("sec5_1_univariate"), ro), InputError);
  // Unknown tolerance key.
  CHECK_THROWS_AS(cli::run(cli::Command::Limit,
                           from(R"({"variables": ["x"], "f": "x^2", "g": "x", "tolerances": {"speed": 1}})"), {}),
                  InputError);
}

TEST_CASE("exceptions map to exit codes", "[commands]") {
  using cli::Command;
  CHECK(cli::error_result(Command::Limit, InputError("bad")).exit_code == cli::exit_code::input_error);
  CHECK(cli::error_result(Command::Limit, ParseError("bad", 3)).exit_code == cli::exit_code::input_error);
  CHECK(cli::error_result(Command::Limit, PathBudgetError("many", 9, 10)).exit_code == cli::exit_code::path_failure);
  CHECK(cli::error_result(Command::Limit, GenericityFault("draws")).exit_code == cli::exit_code::path_failure);
  CHECK(cli::error_result(Command::Limit, ConvergenceError("slow")).exit_code == cli::exit_code::path_failure);
  CHECK(cli::error_result(Command::Limit, std::runtime_error("?")).exit_code == 1);
  const auto r = cli::error_result(Command::Verify, InputError("bad"));
  CHECK(r.report["command"] == "verify");
  CHECK(r.report.contains("error"));
}

TEST_CASE("rendered reports end with a newline", "[commands]") {
  const auto text = cli::render(json{{"a", 1}});
  CHECK(text.back() == '\n');
  CHECK(json::parse(text) == json{{"a", 1}});
}

TEST_CASE("milnor command", "[commands]") {
  const auto r = cli::run(cli::Command::Milnor, corpus("milnor_cusp_sum"), {});
  CHECK(r.report["result"]["points"][0]["multiplicity"] == 4);
  CHECK_THROWS_AS(cli::run(cli::Command::Milnor, from(R"({"variables": ["x"], "f": "x^2"})"), {}), InputError);
}
