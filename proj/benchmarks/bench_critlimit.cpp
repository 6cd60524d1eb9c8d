#include <benchmark/benchmark.h>

#include <random>

#include "critlimit/limitlab.hpp"

using namespace critlimit;

namespace {

const VariableTable kDet({"x11", "x12", "x13", "x21", "x22", "x23", "x31", "x32", "x33"});

Polynomial det3() {
  return parse_polynomial("x11*x22*x33 + x12*x23*x31 + x13*x21*x32 - x13*x22*x31 - x12*x21*x33 - x11*x23*x32", kDet);
}

void BM_ParsePolynomial(benchmark::State& state) {
  const std::string text = "(x11 + 2*x22 - x33)^4 - 3*x12*x21*x13^2 + (1.5-0.5*i)*x31*x32";
  for (auto _ : state) benchmark::DoNotOptimize(parse_polynomial(text, kDet));
}
BENCHMARK(BM_ParsePolynomial);

void BM_CompiledEvaluate(benchmark::State& state) {
  const VarietySpec X = VarietySpec::complete_intersection(kDet, {det3()});
  const std::vector<Complex> u(9, Complex(0.3, -0.2));
  const auto sys = build_lagrange_system(X, build_ed_objective(u));
  const CompiledSystem cs(sys.equations);
  auto scratch = cs.make_scratch();
  std::vector<Complex> x(cs.num_vars(), Complex(0.7, 0.1));
  CVec val(static_cast<Eigen::Index>(cs.num_equations()));
  CMat J(val.size(), static_cast<Eigen::Index>(cs.num_vars()));
  for (auto _ : state) {
    cs.evaluate(x.data(), scratch, val.data(), J);
    benchmark::DoNotOptimize(J.data());
  }
}
BENCHMARK(BM_CompiledEvaluate);

void BM_SolveUnivariate(benchmark::State& state) {
  PolySystem sys;
  sys.vars = VariableTable({"x"});
  std::string eq = "x^" + std::to_string(state.range(0)) + " - 3*x^2 + 2*x - 1";
  sys.equations = {parse_polynomial(eq, sys.vars)};
  sys.unknowns = {0};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_system(sys, SolveOptions{}, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SolveUnivariate)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LimitUnivariate(benchmark::State& state) {
  const VariableTable v({"x"});
  const auto X = VarietySpec::affine_space(v);
  const ObjectiveSpec obj{parse_polynomial("x^4 - 4*x^3", v), parse_polynomial("x", v), 1};
  for (auto _ : state) benchmark::DoNotOptimize(limit_crit(X, obj, LimitOptions{}));
}
BENCHMARK(BM_LimitUnivariate)->Unit(benchmark::kMillisecond);

void BM_LimitCusp(benchmark::State& state) {
  const VariableTable v({"x", "y"});
  const auto X = VarietySpec::affine_space(v);
  Rng rng(8);
  const ObjectiveSpec obj{parse_polynomial("x^3 + y^3", v), random_linear(2, rng), 2};
  for (auto _ : state) benchmark::DoNotOptimize(limit_crit(X, obj, LimitOptions{}));
}
BENCHMARK(BM_LimitCusp)->Unit(benchmark::kMillisecond);

void BM_Cluster(benchmark::State& state) {
  std::mt19937_64 eng(1);
  std::normal_distribution<double> n;
  std::vector<CVec> pts;
  for (int i = 0; i < state.range(0); ++i) {
    CVec p(3);
    for (int k = 0; k < 3; ++k) p(k) = Complex(n(eng), n(eng)) * (i % 4 == 0 ? 1e-9 : 1.0);
    pts.push_back(p);
  }
  for (auto _ : state) benchmark::DoNotOptimize(cluster(pts, 1e-5));
}
BENCHMARK(BM_Cluster)->Arg(64)->Arg(512);

void BM_Milnor(benchmark::State& state) {
  const VariableTable v({"x", "y"});
  const auto f = parse_polynomial("x^4 + y^5 + x^2*y^2", v);
  const std::vector<Complex> at{0.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(milnor_multiplicity(f, at));
}
BENCHMARK(BM_Milnor)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
