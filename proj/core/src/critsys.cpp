#include "critlimit/critsys.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace critlimit {

std::size_t VarietySpec::dimension() const {
  if (parametrization && ideal.empty()) return parametrization->params.size();
  return ambient_dim() - codim;
}

void VarietySpec::validate() const {
  for (const auto& q : ideal) {
    if (q.num_vars() != ambient_dim()) throw InputError("ideal generator lives in the wrong ring");
  }
  if (parametrization) {
    if (parametrization->map.size() != ambient_dim()) {
      throw InputError("parametrization has " + std::to_string(parametrization->map.size()) +
                       " entries, ambient dimension is " + std::to_string(ambient_dim()));
    }
    for (const auto& m : parametrization->map) {
      if (m.num_vars() != parametrization->params.size()) {
        throw InputError("parametrization entry lives in the wrong ring");
      }
    }
    if (parametrization->fiber < 1) throw InputError("fiber cardinality must be positive");
  } else if (!ideal.empty() && ideal.size() != codim) {
    throw InputError("codim mismatch: " + std::to_string(ideal.size()) + " generators for declared codimension " +
                     std::to_string(codim) + " (non-complete intersections need a parametrization)");
  }
  if (codim > ambient_dim()) throw InputError("codimension exceeds ambient dimension");
}

VarietySpec VarietySpec::affine_space(VariableTable coords) {
  VarietySpec X;
  X.coords = std::move(coords);
  return X;
}

VarietySpec VarietySpec::complete_intersection(VariableTable coords, std::vector<Polynomial> ideal) {
  VarietySpec X;
  X.coords = std::move(coords);
  X.codim = ideal.size();
  X.ideal = std::move(ideal);
  X.validate();
  return X;
}

void ObjectiveSpec::validate() const {
  if (f.num_vars() != g.num_vars()) throw InputError("f and g live in different rings");
  if (g.total_degree() > 1) throw InputError("g must be affine-linear");
  bool has_linear = false;
  for (const auto& [e, c] : g.terms()) {
    for (auto v : e) has_linear |= v > 0;
  }
  if (!has_linear) throw InputError("g must have a nonzero linear part");
}

Polynomial random_linear(std::size_t num_vars, Rng& rng) {
  Polynomial g(num_vars);
  for (std::size_t i = 0; i < num_vars; ++i) g += Polynomial::variable(num_vars, i) * rng.coefficient();
  return g;
}

namespace {

// Lagrange equations for h over the ring `ring_vars` whose first N variables are x
// and next k are the multipliers.
std::vector<Polynomial> lagrange_equations(const VarietySpec& X, const Polynomial& h_in_ring,
                                           std::size_t ring_vars) {
  const std::size_t n = X.ambient_dim();
  const std::size_t k = X.ideal.size();
  std::vector<std::size_t> into_ring(n);
  std::iota(into_ring.begin(), into_ring.end(), 0);

  std::vector<Polynomial> q;
  q.reserve(k);
  for (const auto& gen : X.ideal) q.push_back(gen.embed(into_ring, ring_vars));

  std::vector<Polynomial> eqs = q;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial row = h_in_ring.differentiate(i);
    for (std::size_t j = 0; j < k; ++j) {
      row -= Polynomial::variable(ring_vars, n + j) * q[j].differentiate(i);
    }
    eqs.push_back(std::move(row));
  }
  return eqs;
}

VariableTable lagrange_table(const VarietySpec& X) {
  VariableTable vars = X.coords;
  for (std::size_t j = 0; j < X.ideal.size(); ++j) vars.add(vars.fresh_name("lambda" + std::to_string(j + 1)));
  return vars;
}

}  // namespace

PolySystem build_lagrange_system(const VarietySpec& X, const Polynomial& h) {
  X.validate();
  if (X.ideal.size() != X.codim) {
    throw InputError("Lagrange systems need a complete-intersection ideal; use pullback_objective");
  }
  if (h.num_vars() != X.ambient_dim()) throw InputError("objective lives in the wrong ring");

  PolySystem sys;
  sys.vars = lagrange_table(X);
  const std::size_t ring = sys.vars.size();
  std::vector<std::size_t> into_ring(X.ambient_dim());
  std::iota(into_ring.begin(), into_ring.end(), 0);
  sys.equations = lagrange_equations(X, h.embed(into_ring, ring), ring);
  sys.unknowns.resize(ring);
  std::iota(sys.unknowns.begin(), sys.unknowns.end(), 0);
  return sys;
}

CriticalFamily build_family(const VarietySpec& X, const ObjectiveSpec& obj) {
  X.validate();
  obj.validate();
  if (X.ideal.size() != X.codim) {
    throw InputError("the critical family needs a complete-intersection ideal for X");
  }
  if (obj.f.num_vars() != X.ambient_dim()) throw InputError("objective lives in the wrong ring");

  CriticalFamily fam;
  fam.ambient_dim = X.ambient_dim();
  fam.multiplier_count = X.ideal.size();
  fam.system.vars = lagrange_table(X);
  const std::size_t t = fam.system.vars.add(fam.system.vars.fresh_name("t"));
  const std::size_t ring = fam.system.vars.size();

  std::vector<std::size_t> into_ring(X.ambient_dim());
  std::iota(into_ring.begin(), into_ring.end(), 0);
  Polynomial h = obj.f.embed(into_ring, ring) - Polynomial::variable(ring, t) * obj.g.embed(into_ring, ring);

  fam.system.equations = lagrange_equations(X, h, ring);
  fam.system.unknowns.resize(fam.unknown_count());
  std::iota(fam.system.unknowns.begin(), fam.system.unknowns.end(), 0);
  fam.system.parameter = t;
  fam.constraint_rows.resize(X.ideal.size());
  std::iota(fam.constraint_rows.begin(), fam.constraint_rows.end(), 0);
  return fam;
}

Polynomial build_ed_objective(std::span<const Complex> u) {
  const std::size_t n = u.size();
  Polynomial d(n);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial diff = Polynomial::variable(n, i) - Polynomial::constant(n, u[i]);
    d += diff * diff;
  }
  return d;
}

Polynomial ed_perturbation(std::span<const Complex> eps) {
  const std::size_t n = eps.size();
  Polynomial g(n);
  for (std::size_t i = 0; i < n; ++i) g += Polynomial::variable(n, i) * (2.0 * eps[i]);
  return g;
}

PolySystem pullback_objective(const VarietySpec& X, const Polynomial& h) {
  if (!X.parametrization) throw InputError("pullback_objective needs a parametrization");
  X.validate();
  if (h.num_vars() != X.ambient_dim()) throw InputError("objective lives in the wrong ring");
  const auto& phi = *X.parametrization;
  const std::size_t m = phi.params.size();
  Polynomial pulled = h.compose(phi.map, m);

  PolySystem sys;
  sys.vars = phi.params;
  for (std::size_t j = 0; j < m; ++j) sys.equations.push_back(pulled.differentiate(j));
  sys.unknowns.resize(m);
  std::iota(sys.unknowns.begin(), sys.unknowns.end(), 0);
  return sys;
}

PolySystem specialize_t(const CriticalFamily& family, Complex tau) {
  const auto& src = family.system;
  const std::size_t t = family.t_index();
  const std::size_t ring = src.vars.size();
  std::map<std::size_t, Polynomial> binding{{t, Polynomial::constant(ring, tau)}};

  // Drop t from the ring; it is the last variable by construction.
  std::vector<std::string> names(src.vars.names().begin(), src.vars.names().end());
  names.erase(names.begin() + static_cast<std::ptrdiff_t>(t));
  std::vector<std::size_t> keep(ring);
  for (std::size_t v = 0, w = 0; v < ring; ++v) keep[v] = v == t ? 0 : w++;

  PolySystem out;
  out.vars = VariableTable(std::move(names));
  for (const auto& eq : src.equations) {
    Polynomial s = eq.substitute(binding);
    out.equations.push_back(s.embed(keep, ring - 1));
  }
  out.unknowns.resize(family.unknown_count());
  std::iota(out.unknowns.begin(), out.unknowns.end(), 0);
  return out;
}

Eigen::VectorXd constraint_singular_values(const VarietySpec& X, std::span<const Complex> x) {
  const std::size_t k = X.ideal.size();
  const std::size_t n = X.ambient_dim();
  if (k == 0) return {};
  CMat J(k, n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) J(j, i) = X.ideal[j].differentiate(i).evaluate(x);
  }
  Eigen::JacobiSVD<CMat> svd(J);
  return svd.singularValues();
}

double absolute_value_bound(const Polynomial& p, std::span<const Complex> x) {
  double sum = 0.0;
  for (const auto& [e, c] : p.terms()) {
    double term = std::abs(c);
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v]) term *= std::pow(std::abs(x[v]), e[v]);
    }
    sum += term;
  }
  return sum;
}

bool on_regular_locus(const VarietySpec& X, std::span<const Complex> x, double rel_tol) {
  if (X.ideal.empty()) return true;
  auto sv = constraint_singular_values(X, x);
  // A hypersurface has a single singular value, so the ratio alone cannot
  // detect rank loss; compare against the magnitude of the summands at
  // max(1, |x_i|) instead.
  std::vector<Complex> mag(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mag[i] = std::max(1.0, std::abs(x[i]));
  double scale = sv(0);
  for (const auto& q : X.ideal) {
    for (std::size_t i = 0; i < X.ambient_dim(); ++i) {
      scale = std::max(scale, absolute_value_bound(q.differentiate(i), mag));
    }
  }
  if (scale == 0.0) return false;
  return sv(sv.size() - 1) >= rel_tol * scale;
}

}  // namespace critlimit
