#include <catch2/catch_test_macros.hpp>

#include "critlimit/cli/problem.hpp"
#include "critlimit/limitlab.hpp"
#include "oracles.hpp"

using namespace critlimit;

namespace {

CVec pt(std::initializer_list<Complex> v) {
  CVec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto z : v) out(i++) = z;
  return out;
}

cli::Problem problem(const std::string& name) {
  return cli::load_problem(std::string(CRITLIMIT_PROBLEM_DIR) + "/" + name + ".json");
}

}  // namespace

TEST_CASE("critical family layout", "[critsys]") {
  const VariableTable v({"x", "y"});
  const auto X = VarietySpec::complete_intersection(v, {parse_polynomial("x^2 + y^2 - 1", v)});
  const ObjectiveSpec obj{parse_polynomial("x", v), parse_polynomial("y", v), 0};
  const auto fam = build_family(X, obj);
  CHECK(fam.ambient_dim == 2);
  CHECK(fam.multiplier_count == 1);
  CHECK(fam.system.num_equations() == 3);
  CHECK(fam.system.vars.size() == 4);
  CHECK(fam.t_index() == 3);
  // At t = 0 the critical points of x on the circle are (+-1, 0).
  const auto sys0 = specialize_t(fam, 0.0);
  CHECK(relative_residual(sys0, pt({1.0, 0.0, 0.5})) < 1e-15);
  CHECK(on_regular_locus(X, std::vector<Complex>{1.0, 0.0}));
}

TEST_CASE("objective validation", "[critsys]") {
  const VariableTable v({"x"});
  CHECK_THROWS_AS((ObjectiveSpec{parse_polynomial("x", v), parse_polynomial("x^2", v), 0}.validate()), InputError);
  CHECK_THROWS_AS((ObjectiveSpec{parse_polynomial("x", v), parse_polynomial("1", v), 0}.validate()), InputError);
  CHECK_NOTHROW((ObjectiveSpec{parse_polynomial("x", v), parse_polynomial("2*x + 1", v), 0}.validate()));
}

TEST_CASE("distance objective and its perturbation", "[critsys]") {
  const std::vector<Complex> u{1.0, -2.0}, eps{0.5, 3.0};
  const auto d = build_ed_objective(u);
  CHECK(d.evaluate(std::vector<Complex>{1.0, -2.0}) == Complex(0.0));
  CHECK(d.evaluate(std::vector<Complex>{0.0, 0.0}) == Complex(5.0));
  const auto g = ed_perturbation(eps);
  CHECK(g.evaluate(std::vector<Complex>{1.0, 1.0}) == Complex(7.0));
}

TEST_CASE("limit of a univariate Morsification matches the derivative's roots", "[limit]") {
  const auto p = problem("sec5_1_univariate");
  const ObjectiveSpec obj{*p.f, *p.g, 11};
  const auto lc = limit_crit(p.X, obj, LimitOptions{});
  CHECK(lc.generic_count == 3);
  CHECK(lc.infinity_count == 0);
  CHECK(lc.failure_count == 0);
  // Oracle: roots of f' = 4x^3 - 12x^2 from the companion matrix, grouped.
  const auto groups = oracle::group(oracle::companion_roots({0.0, 0.0, -12.0, 4.0}), 1e-6);
  REQUIRE(groups.size() == 2);
  CHECK(lc.lhs.size() == groups.size());
  for (const auto& g : groups) CHECK(lc.lhs.multiplicity_at(pt({g.value}), 1e-6) == g.count);
}

TEST_CASE("a curve component of the critical locus", "[limit][verify]") {
  const auto p = problem("sec5_1_whitney_umbrella_like");
  Rng rng(*p.seed);
  const ObjectiveSpec obj{*p.f, random_linear(3, rng), rng.next_seed()};
  const auto rep = verify_main_theorem(p.X, obj, p.strata, LimitOptions{});
  CHECK(rep.theorem_verified);
  CHECK(rep.conservation_ok);
  CHECK(rep.limit.lhs.cardinality() == 3);
  CHECK(rep.limit.lhs.multiplicity_at(pt({0.0, 0.0, 0.0}), 1e-6) == 2);
  // The simple point Q lies on the parabola y = 0, z = x^2 where g restricted to it is critical.
  const Complex alpha = obj.g.coefficient({1, 0, 0}), gamma = obj.g.coefficient({0, 0, 1});
  const Complex x = -alpha / (2.0 * gamma);
  CHECK(rep.limit.lhs.multiplicity_at(pt({x, 0.0, x * x}), 1e-8) == 1);
  REQUIRE(rep.strata.size() == 3);
  CHECK(rep.strata[0].n == 0);
  CHECK(rep.strata[1].n == 1);
  CHECK(rep.strata[2].n == 2);
}

TEST_CASE("points at infinity on a cubic curve", "[limit][verify]") {
  const auto p = problem("sec5_2_elliptic");
  Rng rng(*p.seed);
  const ObjectiveSpec obj{*p.f, random_linear(2, rng), rng.next_seed()};
  const auto rep = verify_main_theorem(p.X, obj, p.strata, LimitOptions{}, p.euler);
  CHECK(rep.limit.generic_count == 4);
  CHECK(count_points_at_infinity(rep.limit) == 1);
  CHECK(rep.conservation_ok);
  REQUIRE(rep.euler_ok.has_value());
  CHECK(*rep.euler_ok);
  CHECK(rep.euler_expected == 4);
  // The y = 0 slice of the curve: -x^3 - 3x^2 + x + 3 = 0.
  for (const auto& r : oracle::companion_roots({3.0, 1.0, -3.0, -1.0}))
    CHECK(rep.limit.lhs.multiplicity_at(pt({r, 0.0}), 1e-8) == 1);
  CHECK(rep.limit.lhs.cardinality() == 3);
}

TEST_CASE("distance from the cusp of a cardioid", "[limit][verify]") {
  const auto p = problem("ex5_5_cardioid");
  Rng rng(*p.seed);
  const ObjectiveSpec obj{*p.f, random_linear(2, rng), rng.next_seed()};
  const auto rep = verify_main_theorem(p.X, obj, p.strata, LimitOptions{});
  CHECK(rep.theorem_verified);
  CHECK(rep.limit.generic_count == 3);
  CHECK(rep.limit.lhs.multiplicity_at(pt({0.0, 0.0}), 1e-6) == 2);
  // The other real point of the y = 0 slice x^4 + 4x^3 = 0.
  CHECK(rep.limit.lhs.multiplicity_at(pt({-4.0, 0.0}), 1e-6) == 1);
}

TEST_CASE("generic count of a circle's distance function", "[limit]") {
  const auto p = problem("ex5_4_circle");
  const auto ed = ed_degree(p.X, LimitOptions{}, 4);
  CHECK(ed.degree == 2);
  CHECK(ed.draws == std::vector<std::size_t>{2, 2});
  CHECK(ed.witness.solutions.size() == 2);
}

TEST_CASE("stratum membership", "[strata]") {
  const VariableTable v({"x", "y"});
  const StratumSpec s{"line minus origin", {parse_polynomial("y", v)},
                      {{parse_polynomial("x", v), parse_polynomial("y", v)}}, {}};
  CHECK(in_stratum(s, pt({1.0, 0.0}), 1e-6));
  CHECK_FALSE(in_stratum(s, pt({0.0, 0.0}), 1e-6));
  CHECK_FALSE(in_stratum(s, pt({1.0, 1e-3}), 1e-6));
}

TEST_CASE("multiplicity inference", "[strata]") {
  const PointSet lhs({{pt({0.0}), 2}, {pt({1.0}), 1}, {pt({2.0}), 1}}, 1e-5);
  std::vector<StratumReport> strata(3);
  strata[0].name = "A";
  strata[0].crit_g = PointSet({{pt({0.0}), 1}}, 1e-5);
  strata[1].name = "B";
  strata[1].crit_g = PointSet({{pt({1.0}), 1}, {pt({2.0}), 1}}, 1e-5);
  strata[2].name = "empty";
  auto inf = infer_multiplicities(lhs, strata, 1e-6);
  CHECK(inf.problems.empty());
  CHECK(inf.strata[0].n == 2);
  CHECK(inf.strata[1].n == 1);
  CHECK(inf.strata[2].n == 0);
  CHECK(inf.strata[2].vacuous);
  CHECK(multiset_equal(strata_sum(inf.strata, 1e-5), lhs, 1e-6));

  // Unequal multiplicities on one stratum cannot be explained by a single n_i.
  const PointSet uneven({{pt({0.0}), 2}, {pt({1.0}), 2}, {pt({2.0}), 1}}, 1e-5);
  auto bad = infer_multiplicities(uneven, strata, 1e-6);
  CHECK_FALSE(bad.problems.empty());
  CHECK_FALSE(bad.strata[1].n.has_value());

  // A limit atom no stratum accounts for.
  const PointSet extra({{pt({0.0}), 2}, {pt({1.0}), 1}, {pt({2.0}), 1}, {pt({5.0}), 1}}, 1e-5);
  CHECK_FALSE(infer_multiplicities(extra, strata, 1e-6).problems.empty());
}

TEST_CASE("Euler characteristic input", "[strata]") {
  EulerCheck direct{3, {}, {}};
  CHECK(direct.expected_count(1) == -3);
  CHECK(direct.expected_count(2) == 3);
  EulerCheck curve{{}, -1, 3};
  CHECK(curve.expected_count(1) == 4);
  CHECK_FALSE(EulerCheck{}.expected_count(1).has_value());
}

TEST_CASE("critical points on a parametrized stratum", "[strata]") {
  // The parabola (s, s^2) in the plane; g = y - 2x is critical at s = 1.
  const VariableTable v({"x", "y"});
  const VariableTable s({"s"});
  const auto X = VarietySpec::complete_intersection(v, {parse_polynomial("y - x^2", v)});
  StratumSpec par{"parabola", {parse_polynomial("y - x^2", v)}, {}, Parametrization{s, {}, 1}};
  par.parametrization->map = {parse_polynomial("s", s), parse_polynomial("s^2", s)};
  const std::vector<StratumSpec> strata{par};
  const auto reps = strata_crit(X, strata, parse_polynomial("y - 2*x", v), LimitOptions{}, 1);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].solvable);
  CHECK(reps[0].crit_g.cardinality() == 1);
  CHECK(reps[0].crit_g.multiplicity_at(pt({1.0, 1.0}), 1e-8) == 1);
}

TEST_CASE("a stratum with no critical points is vacuous", "[strata]") {
  const VariableTable v({"x", "y"});
  const auto X = VarietySpec::affine_space(v);
  const std::vector<StratumSpec> strata{{"plane", {}, {}, {}}};
  const auto reps = strata_crit(X, strata, parse_polynomial("x + 2*y", v), LimitOptions{}, 1);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].solvable);
  CHECK(reps[0].crit_g.empty());
}
