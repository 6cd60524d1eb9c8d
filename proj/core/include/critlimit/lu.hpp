#pragma once

#include <vector>

#include "critlimit/poly.hpp"

namespace critlimit {

/// LU with partial pivoting for the small square systems of path tracking.
/// Pivots on |re| + |im|, which avoids a hypot per candidate.
class SmallLu {
 public:
  void compute(const CMat& a) {
    lu_ = a;
    const Eigen::Index n = lu_.rows();
    perm_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index p = k;
      double best = -1.0;
      for (Eigen::Index i = k; i < n; ++i) {
        const Complex v = lu_(i, k);
        const double m = std::abs(v.real()) + std::abs(v.imag());
        if (m > best) {
          best = m;
          p = i;
        }
      }
      perm_[static_cast<std::size_t>(k)] = p;
      if (p != k) lu_.row(k).swap(lu_.row(p));
      const Complex inv = 1.0 / lu_(k, k);
      for (Eigen::Index i = k + 1; i < n; ++i) lu_(i, k) *= inv;
      for (Eigen::Index j = k + 1; j < n; ++j) {
        const Complex f = lu_(k, j);
        if (f == Complex(0.0)) continue;
        for (Eigen::Index i = k + 1; i < n; ++i) lu_(i, j) -= lu_(i, k) * f;
      }
    }
  }

  /// x = -A^{-1} b when `negate`, else A^{-1} b. A zero pivot yields non-finite output.
  void solve(const CVec& b, CVec& x, bool negate = false) const {
    const Eigen::Index n = lu_.rows();
    x = negate ? CVec(-b) : b;
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index p = perm_[static_cast<std::size_t>(k)];
      if (p != k) std::swap(x(k), x(p));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex v = x(j);
      for (Eigen::Index i = j + 1; i < n; ++i) x(i) -= lu_(i, j) * v;
    }
    for (Eigen::Index j = n; j-- > 0;) {
      x(j) /= lu_(j, j);
      const Complex v = x(j);
      for (Eigen::Index i = 0; i < j; ++i) x(i) -= lu_(i, j) * v;
    }
  }

 private:
  CMat lu_;
  std::vector<Eigen::Index> perm_;
};

}  // namespace critlimit
