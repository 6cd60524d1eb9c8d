#include <catch2/catch_test_macros.hpp>

#include "critlimit/solve.hpp"
#include "oracles.hpp"

using namespace critlimit;

namespace {

PolySystem square(std::vector<std::string> names, std::vector<std::string> eqs) {
  PolySystem sys;
  sys.vars = VariableTable(std::move(names));
  for (const auto& e : eqs) sys.equations.push_back(parse_polynomial(e, sys.vars));
  for (std::size_t i = 0; i < sys.vars.size(); ++i) sys.unknowns.push_back(i);
  return sys;
}

std::vector<CVec> finite_points(const SolveReport& rep, Eigen::Index head = -1) {
  std::vector<CVec> out;
  for (const auto& p : rep.paths)
    if (p.status == PathOutcome::Status::Finite) out.push_back(head < 0 ? p.endpoint : CVec(p.endpoint.head(head)));
  return out;
}

bool contains(const std::vector<CVec>& pts, const CVec& q, double tol) {
  for (const auto& p : pts)
    if ((p - q).norm() < tol) return true;
  return false;
}

CVec vec(std::initializer_list<Complex> v) {
  CVec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto z : v) out(i++) = z;
  return out;
}

}  // namespace

TEST_CASE("total degree start solutions are roots of unity", "[solve]") {
  const auto sys = square({"x", "y"}, {"x^3 - y", "x*y - 2"});
  const auto [start, sols] = total_degree_start(sys);
  REQUIRE(sols.size() == 6);
  for (const auto& s : sols) {
    CHECK(std::abs(std::pow(s(0), 3) - 1.0) < 1e-12);
    CHECK(std::abs(s(1) * s(1) - 1.0) < 1e-12);
    const std::vector<Complex> pt(s.data(), s.data() + s.size());
    for (const auto& eq : start.equations) CHECK(std::abs(eq.evaluate(pt)) < 1e-12);
  }
}

TEST_CASE("univariate roots agree with the companion matrix", "[solve]") {
  const std::vector<Complex> c{{2.0, -1.0}, 0.5, {0.0, 3.0}, -1.0, 1.0, {0.25, 0.5}};
  const auto sys = square({"x"}, {"(2-i) + 0.5*x + 3*i*x^2 - x^3 + x^4 + (0.25+0.5*i)*x^5"});
  const auto rep = solve_system(sys, SolveOptions{}, 7);
  REQUIRE(rep.paths.size() == 5);
  const auto pts = finite_points(rep);
  REQUIRE(pts.size() == 5);
  for (const auto& root : oracle::companion_roots(c)) CHECK(contains(pts, vec({root}), 1e-9));
  CHECK(rep.finite_nonsingular().size() == 5);
}

TEST_CASE("a double root ends singular with winding number two", "[solve][endgame]") {
  const auto sys = square({"x"}, {"(x - 1.5)^2*(x + 2)"});
  const auto rep = solve_system(sys, SolveOptions{}, 3);
  int singular = 0;
  for (const auto& p : rep.paths) {
    REQUIRE(p.status == PathOutcome::Status::Finite);
    if (p.singular) {
      ++singular;
      CHECK(std::abs(p.endpoint(0) - 1.5) < 1e-8);
      CHECK(p.winding_number == 2);
    }
  }
  CHECK(singular == 2);
}

TEST_CASE("a double root shared with the start system still collects two paths", "[solve][endgame]") {
  // x = 1 also solves x^3 - 1, so both branches into it are regular in tau
  // (winding one each); the multiplicity still shows in the path count.
  const auto sys = square({"x"}, {"(x - 1)^2*(x + 2)"});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto rep = solve_system(sys, SolveOptions{}, seed);
    int at_one = 0;
    for (const auto& p : rep.paths) {
      REQUIRE(p.status == PathOutcome::Status::Finite);
      if (std::abs(p.endpoint(0) - 1.0) < 1e-8) ++at_one;
    }
    CHECK(at_one == 2);
  }
}

TEST_CASE("two circles meet in two points; the other two paths go to infinity", "[solve]") {
  const auto sys = square({"x", "y"}, {"x^2 + y^2 - 1", "(x - 1)^2 + y^2 - 1"});
  const auto rep = solve_system(sys, SolveOptions{}, 9);
  CHECK(rep.count(PathOutcome::Status::Finite) == 2);
  CHECK(rep.count(PathOutcome::Status::AtInfinity) == 2);
  const auto pts = finite_points(rep);
  const double h = std::sqrt(3.0) / 2.0;
  CHECK(contains(pts, vec({0.5, h}), 1e-10));
  CHECK(contains(pts, vec({0.5, -h}), 1e-10));
}

TEST_CASE("path results do not depend on the thread count", "[solve]") {
  const auto sys = square({"x", "y"}, {"x^3 + 2*x*y - 1", "y^2 - x + 3"});
  SolveOptions one, many;
  many.threads = 3;
  const auto a = solve_system(sys, one, 21);
  const auto b = solve_system(sys, many, 21);
  REQUIRE(a.paths.size() == b.paths.size());
  for (std::size_t i = 0; i < a.paths.size(); ++i) {
    CHECK(a.paths[i].status == b.paths[i].status);
    CHECK(a.paths[i].endpoint.size() == b.paths[i].endpoint.size());
    if (a.paths[i].endpoint.size() == b.paths[i].endpoint.size()) CHECK(a.paths[i].endpoint == b.paths[i].endpoint);
  }
}

TEST_CASE("multihomogeneous start count for a Lagrange system", "[solve][multihom]") {
  // Circle distance problem in (x, y | lambda): degrees (2,0), (1,1), (1,1).
  const std::vector<std::vector<int>> deg{{2, 0}, {1, 1}, {1, 1}};
  const VariableGroups groups{{0, 1}, {2}};
  CHECK(multihomogeneous_bezout(deg, groups) == 4);

  const auto X = VarietySpec::complete_intersection(VariableTable({"x", "y"}),
                                                    {parse_polynomial("x^2 + y^2 - 1", VariableTable({"x", "y"}))});
  const std::vector<Complex> u{0.3, -1.2};
  const auto sys = build_lagrange_system(X, build_ed_objective(u));
  CHECK(group_degrees(sys, groups) == deg);
  SolveOptions opts;
  opts.multihom = true;
  opts.groups = groups;
  const auto rep = solve_system(sys, opts, 5);
  CHECK(rep.paths.size() == 4);
  const auto pts = finite_points(rep, 2);
  const double r = std::hypot(0.3, 1.2);
  CHECK(rep.finite_nonsingular().size() == 2);
  CHECK(contains(pts, vec({0.3 / r, -1.2 / r}), 1e-9));
  CHECK(contains(pts, vec({-0.3 / r, 1.2 / r}), 1e-9));
}

TEST_CASE("witness tracking moves solutions within a linear family", "[solve][witness]") {
  const VariableTable v({"x", "y"});
  const auto X = VarietySpec::complete_intersection(v, {parse_polynomial("x^2 + y^2 - 1", v)});
  const std::vector<Complex> ua{{0.7, 0.2}, {-0.4, 1.1}}, ub{{1.5, -0.3}, {0.2, 0.9}};
  GenericWitness w;
  w.system = build_lagrange_system(X, build_ed_objective(ua));
  w.solutions = solve_system(w.system, SolveOptions{}, 1).finite_nonsingular();
  REQUIRE(w.solutions.size() == 2);

  const auto target = build_lagrange_system(X, build_ed_objective(ub));
  const auto moved = track_from_witness(w, target, SolveOptions{}, 2);
  REQUIRE(moved.has_value());
  REQUIRE(moved->size() == 2);
  // Critical points of the distance from u to the circle: +-u / sqrt(u.u).
  const Complex s = std::sqrt(ub[0] * ub[0] + ub[1] * ub[1]);
  std::vector<CVec> xs;
  for (const auto& p : *moved) xs.push_back(p.head(2));
  CHECK(contains(xs, vec({ub[0] / s, ub[1] / s}), 1e-9));
  CHECK(contains(xs, vec({-ub[0] / s, -ub[1] / s}), 1e-9));
}

TEST_CASE("relative residual is scale aware", "[solve]") {
  const auto sys = square({"x"}, {"x^2 - 1e6"});
  CHECK(relative_residual(sys, vec({1000.0})) < 1e-15);
  CHECK(relative_residual(sys, vec({1001.0})) > 1e-4);
}
