// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "critlimit/cli/commands.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace critlimit;
using nlohmann::json;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

cli::Problem corpus(const std::string& name) {
  return cli::load_problem(std::string(CRITLIMIT_PROBLEM_DIR) + "/" + name + ".json");
}

CVec to_vec(const json& point) {
  CVec v(static_cast<Eigen::Index>(point.size()));
  for (std::size_t i = 0; i < point.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = {point[i][0].get<double>(), point[i][1].get<double>()};
  return v;
}

PointSet to_set(const json& set) {
  std::vector<Atom> atoms;
  for (const auto& a : set["atoms"]) atoms.push_back({to_vec(a["point"]), a["multiplicity"].get<int>()});
  return PointSet(std::move(atoms), 1e-5);
}

CVec vec(std::initializer_list<Complex> v) {
  CVec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto z : v) out(i++) = z;
  return out;
}

CVec flat(const Eigen::Matrix3d& m) {
  CVec v(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v(3 * i + j) = m(i, j);
  return v;
}

// Multiplicity of the atom of `s` within tol of p, and the distance to it.
std::pair<int, double> nearest(const PointSet& s, const CVec& p) {
  int m = 0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : s.atoms()) {
    const double d = (a.point - p).norm();
    if (d < best) {
      best = d;
      m = a.multiplicity;
    }
  }
  return {m, best};
}

bool has_atom(const PointSet& s, const CVec& p, int mult, double tol) {
  const auto [m, d] = nearest(s, p);
  return m == mult && d < tol;
}

int failures = 0;

void criterion(int n, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes << " [exception: " << e.what() << "]";
  }
  const double dt = seconds_since(t0);
  if (!c.ok) ++failures;
  std::cout << "criterion " << n << ": " << (c.ok ? "PASS" : "FAIL") << "  " << title << "  (" << std::fixed
            << std::setprecision(2) << dt << " s)" << c.notes.str() << std::endl;
}

}  // namespace

int main() {
  std::cout << "critlimit acceptance suite" << std::endl;

  criterion(1, "univariate Morsification limit", [](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = cli::run(cli::Command::Limit, corpus("sec5_1_univariate"), {});
    const double dt = seconds_since(t0);
    const auto& res = r.report["result"];
    const PointSet lhs = to_set(res["limit"]);
    // Oracle: roots of f' = 4x^3 - 12x^2, grouped.
    const auto roots = oracle::group(oracle::companion_roots({0.0, 0.0, -12.0, 4.0}), 1e-6);
    c.require(roots.size() == 2 && lhs.size() == 2, "two atoms");
    for (const auto& g : roots) c.require(has_atom(lhs, vec({g.value}), g.count, 1e-8), "atom at root of f'");
    c.require(has_atom(lhs, vec({0.0}), 2, 1e-8) && has_atom(lhs, vec({3.0}), 1, 1e-8), "{(0,2),(3,1)}");
    c.require(res["infinity_count"] == 0, "no paths at infinity");
    c.require(dt < 1.0, "runtime < 1 s");
    c.notes << " limit {(0,2),(3,1)}, infinity 0";
  });

  criterion(2, "critical parabola through the origin, strata n = (0,1,2)", [](Check& c) {
    const auto p = corpus("sec5_1_whitney_umbrella_like");
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = cli::run(cli::Command::Verify, p, {});
    const double dt = seconds_since(t0);
    const auto& res = r.report["result"];
    const PointSet lhs = to_set(res["limit"]);
    const Polynomial g = parse_polynomial(res["g"].get<std::string>(), p.X.coords);
    const Complex alpha = g.coefficient({1, 0, 0}), gamma = g.coefficient({0, 0, 1});
    c.require(lhs.size() == 2 && lhs.cardinality() == 3, "two atoms, mass 3");
    c.require(has_atom(lhs, vec({0.0, 0.0, 0.0}), 2, 1e-8), "origin with multiplicity 2");
    bool q_ok = false;
    for (const auto& a : lhs.atoms()) {
      if (a.point.norm() < 1e-6) continue;
      const Complex x = a.point(0), y = a.point(1), z = a.point(2);
      q_ok = a.multiplicity == 1 && std::abs(y) < 1e-8 && std::abs(z - x * x) < 1e-8 &&
             std::abs(alpha + 2.0 * gamma * x) < 1e-8;
      c.notes << " Q residuals y=" << std::abs(y) << " z-x^2=" << std::abs(z - x * x)
              << " alpha+2gamma x=" << std::abs(alpha + 2.0 * gamma * x);
    }
    c.require(q_ok, "Q on the parabola with alpha + 2 gamma x = 0");
    const auto& st = res["strata"];
    c.require(st.size() == 3 && st[0]["n"] == 0 && st[1]["n"] == 1 && st[2]["n"] == 2, "n = (0,1,2)");
    c.require(res["theorem_verified"] == true && r.exit_code == 0, "verified");
    c.require(dt < 5.0, "runtime < 5 s");
  });

  criterion(3, "cubic curve: 3 finite limits, 1 at infinity, Euler cross-check", [](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = cli::run(cli::Command::Verify, corpus("sec5_2_elliptic"), {});
    const double dt = seconds_since(t0);
    const auto& res = r.report["result"];
    const PointSet lhs = to_set(res["limit"]);
    c.require(res["generic"]["count"] == 4, "generic count 4");
    // Oracle: y = 0 slice -x^3 - 3x^2 + x + 3 = 0.
    for (const auto& x : oracle::companion_roots({3.0, 1.0, -3.0, -1.0}))
      c.require(has_atom(lhs, vec({x, 0.0}), 1, 1e-8), "simple atom on the y = 0 slice");
    for (double x : {-3.0, -1.0, 1.0}) c.require(has_atom(lhs, vec({x, 0.0}), 1, 1e-8), "expected finite limit");
    c.require(lhs.cardinality() == 3, "three finite limits");
    c.require(res["infinity_count"] == 1, "one path at infinity");
    c.require(res["euler"]["expected_count"] == 4 && res["euler"]["ok"] == true, "4 = -(-1 - 3)");
    c.require(res["conservation_ok"] == true, "conservation");
    c.require(dt < 5.0, "runtime < 5 s");
  });

  criterion(4, "circle: ED degree 2, limit at the centre is Crit(g|X)", [](Check& c) {
    const auto p = corpus("ex5_4_circle");
    const auto t0 = std::chrono::steady_clock::now();
    const auto ed = ed_degree(p.X, LimitOptions{}, *p.seed);
    const auto r = cli::run(cli::Command::Ed, p, {});
    const double dt = seconds_since(t0);
    c.require(ed.degree == 2, "ED degree 2");
    const auto& res = r.report["result"];
    const PointSet lhs = to_set(res["limit"]);
    const Polynomial g = parse_polynomial(res["g"].get<std::string>(), p.X.coords);
    // g = 2 eps.x; on the unit circle its critical points are +-eps / sqrt(eps.eps).
    const Complex e1 = g.coefficient({1, 0}) / 2.0, e2 = g.coefficient({0, 1}) / 2.0;
    const Complex s = std::sqrt(e1 * e1 + e2 * e2);
    c.require(lhs.size() == 2 && lhs.cardinality() == 2, "two simple points");
    c.require(has_atom(lhs, vec({e1 / s, e2 / s}), 1, 1e-8) && has_atom(lhs, vec({-e1 / s, -e2 / s}), 1, 1e-8),
              "limit = Crit(g|X)");
    c.require(res["theorem_verified"] == true, "verified");
    c.require(dt < 1.0, "runtime < 1 s");
  });

  criterion(5, "cardioid: generic count 3, limit 2 P1 + P2 with P1 the cusp", [](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = cli::run(cli::Command::Verify, corpus("ex5_5_cardioid"), {});
    const double dt = seconds_since(t0);
    const auto& res = r.report["result"];
    const PointSet lhs = to_set(res["limit"]);
    c.require(res["generic"]["count"] == 3, "generic count 3");
    c.require(has_atom(lhs, vec({0.0, 0.0}), 2, 1e-6), "cusp with multiplicity 2");
    // P2: the nonzero root of the y = 0 slice x^4 + 4x^3.
    Complex p2 = 0.0;
    for (const auto& x : oracle::companion_roots({0.0, 0.0, 0.0, 4.0, 1.0}))
      if (std::abs(x) > 1.0) p2 = x;
    c.require(has_atom(lhs, vec({p2, 0.0}), 1, 1e-6), "P2 with multiplicity 1");
    c.require(lhs.cardinality() == 3, "mass 3");
    c.require(res["theorem_verified"] == true, "verified");
    c.require(dt < 5.0, "runtime < 5 s");
  });

  auto eckart_young = [](Check& c, bool multihom, double budget) {
    const auto p1 = corpus("ex5_6_det3_u1"), p2 = corpus("ex5_6_det3_u2"), p4 = corpus("ex5_6_det3_u4");
    const auto t0 = std::chrono::steady_clock::now();
    LimitOptions lo;
    lo.solve.multihom = multihom;
    const auto ed = ed_degree(p1.X, lo, *p1.seed);
    c.notes << " ED degree " << ed.degree << " over " << ed.paths.front() << " paths/draw ("
            << std::setprecision(1) << seconds_since(t0) << " s)";
    c.require(ed.degree == 3, "ED degree 3");
    if (multihom) {
      c.require(ed.paths.front() < 59049, "fewer paths than total degree");
    } else {
      c.require(ed.paths.front() == 59049, "3^10 total-degree paths");
    }
    lo.witness = &ed.witness;

    // u1: the three rank-two truncations.
    const auto r1 = ed_limit(p1.X, *p1.u, p1.strata, lo, *p1.seed);
    Eigen::Matrix3d u1 = Eigen::Matrix3d::Zero();
    u1.diagonal() << 3, 2, 1;
    const auto trunc = oracle::rank_two_truncations(u1);
    c.require(r1.limit.lhs.size() == 3 && r1.limit.lhs.cardinality() == 3, "u1: three simple points");
    for (const auto& m : trunc) c.require(has_atom(r1.limit.lhs, flat(m), 1, 1e-6), "u1: truncation");
    for (const auto& a : r1.limit.lhs.atoms())
      c.require(std::abs(oracle::det3(oracle::as_matrix(a.point))) < 1e-8, "u1: limit on det = 0");
    c.require(r1.theorem_verified, "u1 verified");

    // u2: the rank-two point diag(2,1,0) and two rank-one points.
    const auto r2 = ed_limit(p2.X, *p2.u, p2.strata, lo, *p2.seed);
    int rank_one = 0;
    for (const auto& a : r2.limit.lhs.atoms()) rank_one += oracle::numerical_rank(oracle::as_matrix(a.point)) == 1;
    c.require(rank_one == 2, "u2: two rank-one points");
    Eigen::Matrix3d d;
    d.setZero();
    d.diagonal() << 2, 0, 0;
    c.require(has_atom(r2.limit.lhs, flat(d), 1, 1e-6), "u2: diag(2,0,0)");
    d.diagonal() << 0, 1, 0;
    c.require(has_atom(r2.limit.lhs, flat(d), 1, 1e-6), "u2: diag(0,1,0)");
    d.diagonal() << 2, 1, 0;
    c.require(has_atom(r2.limit.lhs, flat(d), 1, 1e-6), "u2: diag(2,1,0)");
    c.require(r2.theorem_verified, "u2 verified");

    // u4: the origin once and diag(1,0,0) twice.
    const auto r4 = ed_limit(p4.X, *p4.u, p4.strata, lo, *p4.seed);
    d.diagonal() << 1, 0, 0;
    c.require(r4.limit.lhs.size() == 2, "u4: two atoms");
    c.require(has_atom(r4.limit.lhs, CVec::Zero(9), 1, 1e-6), "u4: origin with multiplicity 1");
    c.require(has_atom(r4.limit.lhs, flat(d), 2, 1e-6), "u4: diag(1,0,0) with multiplicity 2");
    c.require(r4.theorem_verified, "u4 verified");

    const double dt = seconds_since(t0);
    c.notes << ", total " << dt << " s";
    c.require(dt < budget, "runtime budget");
  };

  criterion(6, "Eckart-Young limits on the 3x3 determinantal hypersurface (total degree, < 10 min)",
            [&](Check& c) { eckart_young(c, false, 600.0); });
  criterion(6, "Eckart-Young limits on the 3x3 determinantal hypersurface (--multihom, < 2 min)",
            [&](Check& c) { eckart_young(c, true, 120.0); });

  criterion(7, "Milnor numbers agree with limit multiplicities", [](Check& c) {
    struct Case {
      const char* file;
      CVec point;
      int expected;  // hand-computed local algebra dimension
    };
    const Case cases[] = {{"sec5_1_univariate", vec({0.0}), 2},
                          {"milnor_quadratic", vec({0.0}), 1},
                          {"milnor_cusp_sum", vec({0.0, 0.0}), 4}};
    for (const auto& k : cases) {
      const auto p = corpus(k.file);
      const std::vector<Complex> at(k.point.data(), k.point.data() + k.point.size());
      const int mu = milnor_multiplicity(*p.f, at);
      const auto r = cli::run(cli::Command::Limit, p, {});
      const auto [m, dist] = nearest(to_set(r.report["result"]["limit"]), k.point);
      c.notes << " " << k.file << ": milnor " << mu << ", cluster " << m << ";";
      c.require(mu == k.expected, std::string(k.file) + ": Milnor number");
      c.require(dist < 1e-6 && m == mu, std::string(k.file) + ": cluster multiplicity");
    }
  });

  criterion(8, "property suites (100 randomized trials each)", [](Check& c) {
    for (const auto& r : {props::path_conservation(100, 0xC0FFEE), props::seed_invariance(100, 0x5EED),
                          props::pushforward_mass(100, 0xFACE), props::multiset_order(100, 0xBEEF),
                          props::determinism(100, 0xD1CE)}) {
      c.notes << " " << r.name << " " << r.trials - r.failures << "/" << r.trials << ";";
      c.require(r.ok(), r.name + ": " + r.first_failure);
    }
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion check(s) failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
