#include "critlimit/compiled.hpp"

#include <algorithm>
#include <cmath>

namespace critlimit {

CompiledSystem::CompiledSystem(std::span<const Polynomial> polys) {
  num_vars_ = polys.empty() ? 0 : polys.front().num_vars();
  max_exp_.assign(num_vars_, 0);
  eq_begin_.push_back(0);
  term_begin_.push_back(0);
  for (const auto& p : polys) {
    if (p.num_vars() != num_vars_) throw InputError("compiled system mixes rings");
    for (const auto& [e, c] : p.terms()) {
      std::uint32_t count = 0;
      for (std::size_t v = 0; v < num_vars_; ++v) {
        if (!e[v]) continue;
        factors_.push_back({static_cast<std::uint32_t>(v), e[v], 0});
        max_exp_[v] = std::max<std::uint32_t>(max_exp_[v], e[v]);
        ++count;
      }
      max_factors_ = std::max(max_factors_, count);
      coef_.push_back(c);
      term_begin_.push_back(static_cast<std::uint32_t>(factors_.size()));
    }
    eq_begin_.push_back(static_cast<std::uint32_t>(coef_.size()));
  }
  pow_offset_.resize(num_vars_);
  std::uint32_t off = 0;
  for (std::size_t v = 0; v < num_vars_; ++v) {
    pow_offset_[v] = off;
    off += max_exp_[v] + 1;
  }
  for (auto& f : factors_) f.slot = pow_offset_[f.var] + f.exp;
}

CompiledSystem::EvalScratch CompiledSystem::make_scratch() const {
  EvalScratch s;
  std::size_t total = 0;
  for (auto m : max_exp_) total += m + 1;
  s.powers.resize(total);
  s.prefix.resize(max_factors_ + 1);
  return s;
}

void CompiledSystem::fill_powers(const Complex* x, EvalScratch& s) const {
  for (std::size_t v = 0; v < num_vars_; ++v) {
    Complex* p = s.powers.data() + pow_offset_[v];
    p[0] = 1.0;
    for (std::uint32_t k = 1; k <= max_exp_[v]; ++k) p[k] = p[k - 1] * x[v];
  }
}

void CompiledSystem::evaluate_values(const Complex* x, EvalScratch& s, Complex* values) const {
  fill_powers(x, s);
  const std::size_t m = num_equations();
  for (std::size_t i = 0; i < m; ++i) {
    Complex sum = 0.0;
    for (auto t = eq_begin_[i]; t < eq_begin_[i + 1]; ++t) {
      Complex term = coef_[t];
      for (auto f = term_begin_[t]; f < term_begin_[t + 1]; ++f) term *= s.powers[factors_[f].slot];
      sum += term;
    }
    values[i] = sum;
  }
}

void CompiledSystem::evaluate(const Complex* x, EvalScratch& s, Complex* values, CMat& jac,
                              Eigen::Index row_offset) const {
  fill_powers(x, s);
  const std::size_t m = num_equations();
  jac.block(row_offset, 0, static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(num_vars_)).setZero();
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Index row = row_offset + static_cast<Eigen::Index>(i);
    Complex sum = 0.0;
    for (auto t = eq_begin_[i]; t < eq_begin_[i + 1]; ++t) {
      const auto fb = term_begin_[t], fe = term_begin_[t + 1];
      const std::uint32_t nf = fe - fb;
      // prefix[k] = coef * prod of the first k factor powers
      const Complex* pw = s.powers.data();
      s.prefix[0] = coef_[t];
      for (std::uint32_t k = 0; k < nf; ++k) s.prefix[k + 1] = s.prefix[k] * pw[factors_[fb + k].slot];
      sum += s.prefix[nf];
      Complex suffix = 1.0;
      for (std::uint32_t k = nf; k-- > 0;) {
        const auto& fac = factors_[fb + k];
        const Complex d = fac.exp == 1 ? s.prefix[k] * suffix : s.prefix[k] * suffix * (double(fac.exp) * pw[fac.slot - 1]);
        jac(row, fac.var) += d;
        suffix *= pw[fac.slot];
      }
    }
    values[i] = sum;
  }
}

void CompiledSystem::absolute_jacobian(const Complex* x, Eigen::MatrixXd& jac) const {
  const std::size_t m = num_equations();
  jac.setZero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(num_vars_));
  for (std::size_t i = 0; i < m; ++i) {
    for (auto t = eq_begin_[i]; t < eq_begin_[i + 1]; ++t) {
      for (auto f = term_begin_[t]; f < term_begin_[t + 1]; ++f) {
        double d = std::abs(coef_[t]) * factors_[f].exp * std::pow(std::abs(x[factors_[f].var]), factors_[f].exp - 1.0);
        for (auto g = term_begin_[t]; g < term_begin_[t + 1]; ++g) {
          if (g != f) d *= std::pow(std::abs(x[factors_[g].var]), double(factors_[g].exp));
        }
        jac(static_cast<Eigen::Index>(i), factors_[f].var) += d;
      }
    }
  }
}

}  // namespace critlimit
