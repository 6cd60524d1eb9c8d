#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "critlimit/poly.hpp"

namespace critlimit {

/// Flat straight-line form of a list of polynomials for repeated evaluation of
/// values and the full gradient. Instances are immutable; per-call scratch
/// lives in EvalScratch so one CompiledSystem can be shared across threads.
class CompiledSystem {
 public:
  struct EvalScratch {
    std::vector<Complex> powers;
    std::vector<Complex> prefix;
  };

  CompiledSystem() = default;
  explicit CompiledSystem(std::span<const Polynomial> polys);

  std::size_t num_equations() const noexcept { return eq_begin_.empty() ? 0 : eq_begin_.size() - 1; }
  std::size_t num_vars() const noexcept { return num_vars_; }

  EvalScratch make_scratch() const;

  /// values(i) = p_i(x); jac(i, v) = dp_i/dx_v for v < num_vars. `jac` must be
  /// at least num_equations x num_vars; only that block is written.
  void evaluate(const Complex* x, EvalScratch& s, Complex* values, CMat& jac, Eigen::Index row_offset = 0) const;

  void evaluate_values(const Complex* x, EvalScratch& s, Complex* values) const;

  /// Same as evaluate but with |coefficients| and |x|: magnitude of the summands.
  void absolute_jacobian(const Complex* x, Eigen::MatrixXd& jac) const;

 private:
  struct Factor {
    std::uint32_t var;
    std::uint32_t exp;
    std::uint32_t slot;  // index of x_var^exp in the power table
  };

  void fill_powers(const Complex* x, EvalScratch& s) const;
  Complex power(const EvalScratch& s, std::uint32_t var, std::uint32_t exp) const {
    return s.powers[pow_offset_[var] + exp];
  }

  std::size_t num_vars_ = 0;
  std::vector<std::uint32_t> eq_begin_;    // term ranges per equation
  std::vector<std::uint32_t> term_begin_;  // factor ranges per term
  std::vector<Complex> coef_;
  std::vector<Factor> factors_;
  std::vector<std::uint32_t> max_exp_;
  std::vector<std::uint32_t> pow_offset_;
  std::uint32_t max_factors_ = 0;
};

}  // namespace critlimit
