#include <catch2/catch_test_macros.hpp>

#include <cmath>
#include <numbers>

#include "critlimit/endgame.hpp"

using namespace critlimit;

namespace {

PolySystem family(const char* eq) {
  PolySystem sys;
  sys.vars = VariableTable({"x", "t"});
  sys.equations = {parse_polynomial(eq, sys.vars)};
  sys.unknowns = {0};
  sys.parameter = 1;
  return sys;
}

EndgameResult run(const char* eq, Complex start_x, Complex direction, EndgameConfig cfg = {}) {
  const ParameterHomotopy H(family(eq));
  auto eval = H.make_evaluator();
  PathTracker tracker(*eval, H.dim(), TrackerConfig{});
  CVec start(1);
  start << start_x;
  return cauchy_endgame(tracker, direction, start, cfg);
}

}  // namespace

TEST_CASE("winding number equals the ramification order", "[endgame]") {
  const Complex dir = std::polar(1.0, 0.3);
  for (int k : {1, 2, 3, 5}) {
    INFO("x^" << k << " = t");
    const std::string eq = "x^" + std::to_string(k) + " - t";
    const Complex x0 = std::pow(0.1 * dir, 1.0 / k);
    const auto r = run(eq.c_str(), x0, dir);
    REQUIRE(r.status == EndgameResult::Status::Converged);
    CHECK(r.winding_number == k);
    CHECK(std::abs(r.limit(0)) < 1e-8);
  }
}

TEST_CASE("a regular branch converges with winding one", "[endgame]") {
  const Complex dir = std::polar(1.0, -1.1);
  const auto r = run("x^2 - (1 + t)", std::sqrt(1.0 + 0.1 * dir), dir);
  REQUIRE(r.status == EndgameResult::Status::Converged);
  CHECK(r.winding_number == 1);
  CHECK(std::abs(r.limit(0) - 1.0) < 1e-10);
}

TEST_CASE("a pole is classified as divergent", "[endgame]") {
  const Complex dir = std::polar(1.0, 2.0);
  const auto r = run("t*x - 1", 1.0 / (0.1 * dir), dir);
  CHECK(r.status == EndgameResult::Status::Diverged);
}

TEST_CASE("a fractional pole is classified as divergent", "[endgame]") {
  const Complex dir = std::polar(1.0, 0.7);
  const auto r = run("t*x^2 - 1", 1.0 / std::sqrt(0.1 * dir), dir);
  CHECK(r.status == EndgameResult::Status::Diverged);
}

TEST_CASE("divergence helpers", "[endgame]") {
  const std::vector<double> up{1.0, 10.0, 1e3, 1e9};
  const std::vector<double> bounded{1.0, 2.0, 1.5, 1e9};
  CHECK(classify_divergence(up, 1e8));
  CHECK_FALSE(classify_divergence(bounded, 1e8));
  CHECK_FALSE(classify_divergence(std::vector<double>{1.0, 2.0, 3.0}, 1e8));

  // Norms growing like r^-1/2 while r halves each ring.
  std::vector<double> growth;
  for (int k = 0; k < 6; ++k) growth.push_back(std::pow(2.0, 0.5 * k));
  CHECK(power_law_growth(growth, 4, 0.5, 0.1));
  const std::vector<double> flat(6, 3.0);
  CHECK_FALSE(power_law_growth(flat, 4, 0.5, 0.1));
}
