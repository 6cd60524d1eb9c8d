#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "critlimit/poly.hpp"
#include "critlimit/rng.hpp"

namespace critlimit {

/// Polynomial map from parameter space onto a dense subset of a variety.
struct Parametrization {
  VariableTable params;
  std::vector<Polynomial> map;  // one entry per ambient coordinate, in `params`
  int fiber = 1;                // points of a generic fiber
};

/// Affine variety X in C^N: a complete-intersection ideal, a parametrization, or both.
struct VarietySpec {
  VariableTable coords;
  std::vector<Polynomial> ideal;
  std::size_t codim = 0;
  std::optional<Parametrization> parametrization;

  std::size_t ambient_dim() const noexcept { return coords.size(); }
  std::size_t dimension() const;

  /// Throws InputError when the invariants do not hold.
  void validate() const;

  static VarietySpec affine_space(VariableTable coords);
  static VarietySpec complete_intersection(VariableTable coords, std::vector<Polynomial> ideal);
};

/// The pencil f - t g on X.
struct ObjectiveSpec {
  Polynomial f;
  Polynomial g;
  std::uint64_t seed = 0;

  /// g must have degree at most one and a nonzero linear part.
  void validate() const;
};

/// Random linear form sum c_i x_i with coefficients on an annulus in C.
Polynomial random_linear(std::size_t num_vars, Rng& rng);

/// Square family in unknowns (x, lambda) and the parameter t, laid out as
/// [x_1..x_N, lambda_1..lambda_k, t] in `system.vars`.
struct CriticalFamily {
  PolySystem system;
  std::size_t ambient_dim = 0;
  std::size_t multiplier_count = 0;
  std::vector<std::size_t> constraint_rows;

  std::size_t unknown_count() const noexcept { return ambient_dim + multiplier_count; }
  std::size_t t_index() const { return *system.parameter; }
};

/// {q_1..q_k, grad h - sum_j lambda_j grad q_j} in unknowns (x, lambda).
PolySystem build_lagrange_system(const VarietySpec& X, const Polynomial& h);

/// Lagrange system of h = f - t g with t kept as a parameter.
CriticalFamily build_family(const VarietySpec& X, const ObjectiveSpec& obj);

/// sum_i (x_i - u_i)^2 in a ring of u.size() variables.
Polynomial build_ed_objective(std::span<const Complex> u);

/// Perturbation direction g = 2 sum eps_i x_i for data moved to u + t eps.
Polynomial ed_perturbation(std::span<const Complex> eps);

/// {d(h o phi)/ds_j = 0}: critical points of h on the image of the parametrization.
PolySystem pullback_objective(const VarietySpec& X, const Polynomial& h);

/// Substitutes t := tau; the result has the same unknowns and no parameter.
PolySystem specialize_t(const CriticalFamily& family, Complex tau);

/// Singular values of the constraint Jacobian (k x N) at x, descending.
Eigen::VectorXd constraint_singular_values(const VarietySpec& X, std::span<const Complex> x);

/// sum |c| prod |x_v|^e_v over the terms of p: the scale against which p(x) is small.
double absolute_value_bound(const Polynomial& p, std::span<const Complex> x);

/// True when the constraint Jacobian at x has full rank k, judged by the
/// relative threshold smallest singular value >= rel_tol * scale, where the
/// scale is the larger of the top singular value and the summand magnitude
/// at max(1, |x_i|).
bool on_regular_locus(const VarietySpec& X, std::span<const Complex> x, double rel_tol = 1e-8);

}  // namespace critlimit
