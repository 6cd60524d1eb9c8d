#pragma once

#include <memory>
#include <vector>

#include "critlimit/compiled.hpp"
#include "critlimit/rng.hpp"

namespace critlimit {

/// Per-thread evaluation context of a homotopy H(z, tau).
class HomotopyEvaluator {
 public:
  virtual ~HomotopyEvaluator() = default;
  /// H(z, tau), dH/dz and dH/dtau.
  virtual void evaluate(const CVec& z, Complex tau, CVec& value, CMat& dz, CVec& dtau) = 0;
  virtual void evaluate_value(const CVec& z, Complex tau, CVec& value) = 0;
};

/// A square system depending holomorphically on one complex parameter tau; the
/// target of every homotopy here sits at tau = 0.
class Homotopy {
 public:
  virtual ~Homotopy() = default;
  virtual Eigen::Index dim() const = 0;
  virtual std::unique_ptr<HomotopyEvaluator> make_evaluator() const = 0;
};

/// F(z, t) with t = tau: the unknowns are the first dim() variables of `system`,
/// the parameter is the variable at `param_index`.
class ParameterHomotopy final : public Homotopy {
 public:
  ParameterHomotopy(const PolySystem& system);

  Eigen::Index dim() const override { return static_cast<Eigen::Index>(n_); }
  std::unique_ptr<HomotopyEvaluator> make_evaluator() const override;

  const CompiledSystem& compiled() const { return compiled_; }
  std::size_t param_index() const { return param_; }

 private:
  CompiledSystem compiled_;
  std::size_t n_;
  std::size_t param_;
};

/// Partition of the affine unknowns into groups; each group gets its own
/// homogenizing coordinate and affine patch.
using VariableGroups = std::vector<std::vector<std::size_t>>;

/// Homogeneous start system over [affine unknowns..., h_1..h_G].
class StartSystem {
 public:
  struct Scratch {
    CompiledSystem::EvalScratch compiled;
    std::vector<Complex> factors;
    std::vector<Complex> prefix;
  };

  virtual ~StartSystem() = default;
  virtual std::size_t num_paths() const = 0;
  /// Homogeneous start solution with every h_g = 1.
  virtual CVec start_point(std::size_t index) const = 0;
  virtual Scratch make_scratch() const = 0;
  virtual void evaluate(const Complex* z, Scratch& s, Complex* values, CMat& jac) const = 0;
};

/// {z_i^{d_i} - h^{d_i}}: roots-of-unity start solutions, one group.
class TotalDegreeStart final : public StartSystem {
 public:
  explicit TotalDegreeStart(std::vector<int> degrees);

  std::size_t num_paths() const override { return paths_; }
  CVec start_point(std::size_t index) const override;
  Scratch make_scratch() const override { return {compiled_.make_scratch(), {}, {}}; }
  void evaluate(const Complex* z, Scratch& s, Complex* values, CMat& jac) const override;

  /// The start equations as polynomials in [z_1..z_n, h].
  const std::vector<Polynomial>& polynomials() const { return polys_; }

 private:
  std::vector<int> degrees_;
  std::vector<Polynomial> polys_;
  CompiledSystem compiled_;
  std::size_t paths_ = 1;
};

/// Products of random linear forms, one form per unit of group degree.
class LinearProductStart final : public StartSystem {
 public:
  /// degrees[i][g]: degree of equation i in group g.
  LinearProductStart(std::vector<std::vector<int>> degrees, const VariableGroups& groups, std::size_t num_affine,
                     Rng& rng);

  std::size_t num_paths() const override { return choices_.size(); }
  CVec start_point(std::size_t index) const override;
  Scratch make_scratch() const override;
  void evaluate(const Complex* z, Scratch& s, Complex* values, CMat& jac) const override;

 private:
  struct Factor {
    std::size_t group;
    CVec coeffs;  // over the group's members followed by its h coordinate
  };

  std::size_t num_affine_;
  VariableGroups groups_;
  std::vector<std::vector<Factor>> factors_;
  std::vector<std::vector<std::uint16_t>> choices_;
  std::size_t max_factors_ = 0;
};

/// Multihomogeneous Bezout number of `degrees` with respect to `groups`.
std::size_t multihomogeneous_bezout(const std::vector<std::vector<int>>& degrees, const VariableGroups& groups);

/// gamma * tau * S(z) + (1 - tau) * T(z) on random affine patches of the
/// multiprojective space of `groups`. Coordinates: [affine unknowns..., h_1..h_G].
class ProjectiveHomotopy final : public Homotopy {
 public:
  ProjectiveHomotopy(const PolySystem& target, VariableGroups groups, std::shared_ptr<const StartSystem> start,
                     Complex gamma, Rng& rng);

  Eigen::Index dim() const override { return static_cast<Eigen::Index>(n_ + groups_.size()); }
  std::unique_ptr<HomotopyEvaluator> make_evaluator() const override;

  std::size_t num_paths() const { return start_->num_paths(); }
  /// Start solution scaled onto the patches.
  CVec start_point(std::size_t index) const;

  /// Affine unknowns z_j / h_g.
  CVec dehomogenize(const CVec& z) const;
  /// max_j |z_j / h_g|; +inf when some h_g vanishes.
  double affine_norm(const CVec& z) const;

  Complex gamma() const { return gamma_; }
  const VariableGroups& groups() const { return groups_; }
  const CompiledSystem& target() const { return target_; }
  const StartSystem& start() const { return *start_; }
  const CMat& patches() const { return patches_; }

  /// Target equations multiplied through by powers of the h_g.
  static std::vector<Polynomial> homogenize(const PolySystem& target, const VariableGroups& groups);

 private:
  std::size_t n_;
  VariableGroups groups_;
  std::vector<std::size_t> group_of_;
  CompiledSystem target_;
  std::shared_ptr<const StartSystem> start_;
  Complex gamma_;
  CMat patches_;  // G x (n + G)
};

/// Degree of each equation of `sys` in each group of unknown indices.
std::vector<std::vector<int>> group_degrees(const PolySystem& sys, const VariableGroups& groups);

}  // namespace critlimit
