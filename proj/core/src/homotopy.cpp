#include "critlimit/homotopy.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace critlimit {

namespace {

constexpr std::size_t kMaxPaths = 50'000'000;

class ParameterEvaluator final : public HomotopyEvaluator {
 public:
  explicit ParameterEvaluator(const ParameterHomotopy& h)
      : h_(h), scratch_(h.compiled().make_scratch()), x_(h.dim() + 1), jac_(h.dim(), h.dim() + 1) {}

  void evaluate(const CVec& z, Complex tau, CVec& value, CMat& dz, CVec& dtau) override {
    load(z, tau);
    const auto n = h_.dim();
    value.resize(n);
    h_.compiled().evaluate(x_.data(), scratch_, value.data(), jac_);
    dz = jac_.leftCols(n);
    dtau = jac_.col(n);
  }

  void evaluate_value(const CVec& z, Complex tau, CVec& value) override {
    load(z, tau);
    value.resize(h_.dim());
    h_.compiled().evaluate_values(x_.data(), scratch_, value.data());
  }

 private:
  void load(const CVec& z, Complex tau) {
    x_.head(h_.dim()) = z;
    x_(h_.dim()) = tau;
  }

  const ParameterHomotopy& h_;
  CompiledSystem::EvalScratch scratch_;
  CVec x_;
  CMat jac_;
};

class ProjectiveEvaluator final : public HomotopyEvaluator {
 public:
  explicit ProjectiveEvaluator(const ProjectiveHomotopy& h)
      : h_(h),
        n_(h.target().num_equations()),
        tscratch_(h.target().make_scratch()),
        sscratch_(h.start().make_scratch()),
        tv_(n_),
        sv_(n_),
        tj_(n_, h.dim()),
        sj_(n_, h.dim()) {}

  void evaluate(const CVec& z, Complex tau, CVec& value, CMat& dz, CVec& dtau) override {
    const auto dim = h_.dim();
    const auto n = static_cast<Eigen::Index>(n_);
    h_.target().evaluate(z.data(), tscratch_, tv_.data(), tj_);
    h_.start().evaluate(z.data(), sscratch_, sv_.data(), sj_);
    const Complex a = h_.gamma() * tau;
    const Complex b = 1.0 - tau;
    value.resize(dim);
    dz.resize(dim, dim);
    dtau.resize(dim);
    value.head(n) = a * sv_ + b * tv_;
    value.tail(dim - n) = h_.patches() * z - CVec::Ones(dim - n);
    dz.topRows(n) = a * sj_ + b * tj_;
    dz.bottomRows(dim - n) = h_.patches();
    dtau.head(n) = h_.gamma() * sv_ - tv_;
    dtau.tail(dim - n).setZero();
  }

  void evaluate_value(const CVec& z, Complex tau, CVec& value) override {
    const auto dim = h_.dim();
    const auto n = static_cast<Eigen::Index>(n_);
    h_.target().evaluate_values(z.data(), tscratch_, tv_.data());
    h_.start().evaluate(z.data(), sscratch_, sv_.data(), sj_);
    value.resize(dim);
    value.head(n) = h_.gamma() * tau * sv_ + (1.0 - tau) * tv_;
    value.tail(dim - n) = h_.patches() * z - CVec::Ones(dim - n);
  }

 private:
  const ProjectiveHomotopy& h_;
  std::size_t n_;
  CompiledSystem::EvalScratch tscratch_;
  StartSystem::Scratch sscratch_;
  CVec tv_, sv_;
  CMat tj_, sj_;
};

}  // namespace

ParameterHomotopy::ParameterHomotopy(const PolySystem& system) {
  if (!system.parameter) throw InputError("parameter homotopy needs a parameter variable");
  n_ = system.num_unknowns();
  param_ = *system.parameter;
  if (!system.is_square()) throw InputError("parameter homotopy needs a square system");
  if (param_ != n_ || system.vars.size() != n_ + 1) {
    throw InputError("parameter homotopy expects the layout [unknowns..., parameter]");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (system.unknowns[i] != i) throw InputError("parameter homotopy expects unknowns in ring order");
  }
  compiled_ = CompiledSystem(system.equations);
}

std::unique_ptr<HomotopyEvaluator> ParameterHomotopy::make_evaluator() const {
  return std::make_unique<ParameterEvaluator>(*this);
}

TotalDegreeStart::TotalDegreeStart(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  const std::size_t n = degrees_.size();
  const std::size_t ring = n + 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (degrees_[i] < 1) throw InputError("equation " + std::to_string(i + 1) + " has degree zero");
    auto d = static_cast<unsigned>(degrees_[i]);
    polys_.push_back(Polynomial::variable(ring, i).pow(d) - Polynomial::variable(ring, n).pow(d));
    if (paths_ > kMaxPaths / d) throw InputError("Bezout number exceeds the path limit");
    paths_ *= d;
  }
  compiled_ = CompiledSystem(polys_);
}

CVec TotalDegreeStart::start_point(std::size_t index) const {
  const std::size_t n = degrees_.size();
  CVec z(static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = static_cast<std::size_t>(degrees_[i]);
    const std::size_t k = index % d;
    index /= d;
    z(static_cast<Eigen::Index>(i)) = std::polar(1.0, 2.0 * std::numbers::pi * double(k) / double(d));
  }
  z(static_cast<Eigen::Index>(n)) = 1.0;
  return z;
}

void TotalDegreeStart::evaluate(const Complex* z, Scratch& s, Complex* values, CMat& jac) const {
  compiled_.evaluate(z, s.compiled, values, jac);
}

std::size_t multihomogeneous_bezout(const std::vector<std::vector<int>>& degrees, const VariableGroups& groups) {
  // Count assignments of one group per equation with each group used |group|
  // times, weighted by the product of the chosen degrees.
  std::map<std::vector<std::size_t>, std::size_t> states{{std::vector<std::size_t>(groups.size(), 0), 1}};
  for (const auto& row : degrees) {
    std::map<std::vector<std::size_t>, std::size_t> next;
    for (const auto& [used, count] : states) {
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (row[g] <= 0 || used[g] >= groups[g].size()) continue;
        auto u = used;
        ++u[g];
        next[u] += count * static_cast<std::size_t>(row[g]);
      }
    }
    states = std::move(next);
  }
  std::vector<std::size_t> full;
  for (const auto& g : groups) full.push_back(g.size());
  auto it = states.find(full);
  return it == states.end() ? 0 : it->second;
}

LinearProductStart::LinearProductStart(std::vector<std::vector<int>> degrees, const VariableGroups& groups,
                                       std::size_t num_affine, Rng& rng)
    : num_affine_(num_affine), groups_(groups) {
  const std::size_t n = degrees.size();
  if (n != num_affine) throw InputError("linear-product start needs a square system");
  if (multihomogeneous_bezout(degrees, groups) > kMaxPaths) {
    throw InputError("multihomogeneous Bezout number exceeds the path limit");
  }
  factors_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (int k = 0; k < degrees[i][g]; ++k) {
        Factor f{g, CVec(static_cast<Eigen::Index>(groups[g].size() + 1))};
        for (auto& c : f.coeffs) c = rng.coefficient();
        factors_[i].push_back(std::move(f));
      }
    }
    if (factors_[i].empty()) throw InputError("equation " + std::to_string(i + 1) + " has degree zero");
    max_factors_ = std::max(max_factors_, factors_[i].size());
  }

  // Depth-first enumeration of factor choices that fill every group exactly.
  std::vector<std::size_t> used(groups.size(), 0);
  std::vector<std::uint16_t> pick(n);
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      choices_.push_back(pick);
      return;
    }
    for (std::size_t j = 0; j < factors_[i].size(); ++j) {
      const std::size_t g = factors_[i][j].group;
      if (used[g] >= groups[g].size()) continue;
      ++used[g];
      pick[i] = static_cast<std::uint16_t>(j);
      self(self, i + 1);
      --used[g];
    }
  };
  recurse(recurse, 0);
}

CVec LinearProductStart::start_point(std::size_t index) const {
  const auto& pick = choices_.at(index);
  const std::size_t G = groups_.size();
  CVec z(static_cast<Eigen::Index>(num_affine_ + G));
  for (std::size_t g = 0; g < G; ++g) {
    const auto m = static_cast<Eigen::Index>(groups_[g].size());
    CMat A(m, m);
    CVec b(m);
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < pick.size(); ++i) {
      const auto& f = factors_[i][pick[i]];
      if (f.group != g) continue;
      A.row(row) = f.coeffs.head(m).transpose();
      b(row) = -f.coeffs(m);
      ++row;
    }
    CVec sol = A.fullPivLu().solve(b);
    for (Eigen::Index k = 0; k < m; ++k) z(static_cast<Eigen::Index>(groups_[g][k])) = sol(k);
    z(static_cast<Eigen::Index>(num_affine_ + g)) = 1.0;
  }
  return z;
}

StartSystem::Scratch LinearProductStart::make_scratch() const {
  Scratch s;
  s.factors.resize(max_factors_);
  s.prefix.resize(max_factors_ + 1);
  return s;
}

void LinearProductStart::evaluate(const Complex* z, Scratch& s, Complex* values, CMat& jac) const {
  const std::size_t n = factors_.size();
  jac.topRows(static_cast<Eigen::Index>(n)).setZero();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& fs = factors_[i];
    const std::size_t k = fs.size();
    s.prefix[0] = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      const auto& members = groups_[fs[j].group];
      const auto m = members.size();
      Complex v = fs[j].coeffs(static_cast<Eigen::Index>(m)) * z[num_affine_ + fs[j].group];
      for (std::size_t a = 0; a < m; ++a) v += fs[j].coeffs(static_cast<Eigen::Index>(a)) * z[members[a]];
      s.factors[j] = v;
      s.prefix[j + 1] = s.prefix[j] * v;
    }
    values[i] = s.prefix[k];
    Complex suffix = 1.0;
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t j = k; j-- > 0;) {
      const Complex w = s.prefix[j] * suffix;
      const auto& members = groups_[fs[j].group];
      const auto m = members.size();
      for (std::size_t a = 0; a < m; ++a) {
        jac(row, static_cast<Eigen::Index>(members[a])) += w * fs[j].coeffs(static_cast<Eigen::Index>(a));
      }
      jac(row, static_cast<Eigen::Index>(num_affine_ + fs[j].group)) += w * fs[j].coeffs(static_cast<Eigen::Index>(m));
      suffix *= s.factors[j];
    }
  }
}

std::vector<std::vector<int>> group_degrees(const PolySystem& sys, const VariableGroups& groups) {
  std::vector<std::vector<int>> out;
  for (const auto& eq : sys.equations) {
    std::vector<int> row;
    for (const auto& g : groups) row.push_back(std::max(0, eq.degree_in(g)));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<Polynomial> ProjectiveHomotopy::homogenize(const PolySystem& target, const VariableGroups& groups) {
  const std::size_t n = target.vars.size();
  const std::size_t G = groups.size();
  auto degrees = group_degrees(target, groups);
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < target.equations.size(); ++i) {
    Polynomial p(n + G);
    for (const auto& [e, c] : target.equations[i].terms()) {
      Polynomial::Exponent he(n + G, 0);
      std::copy(e.begin(), e.end(), he.begin());
      for (std::size_t g = 0; g < G; ++g) {
        int deg = 0;
        for (auto v : groups[g]) deg += e[v];
        he[n + g] = static_cast<std::uint16_t>(degrees[i][g] - deg);
      }
      p.add_term(he, c);
    }
    out.push_back(std::move(p));
  }
  return out;
}

ProjectiveHomotopy::ProjectiveHomotopy(const PolySystem& target, VariableGroups groups,
                                       std::shared_ptr<const StartSystem> start, Complex gamma, Rng& rng)
    : n_(target.num_unknowns()), groups_(std::move(groups)), start_(std::move(start)), gamma_(gamma) {
  if (!target.is_square()) throw InputError("homotopy target must be square");
  if (target.parameter || target.vars.size() != n_) throw InputError("homotopy target must not carry a parameter");
  group_of_.assign(n_, groups_.size());
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (auto v : groups_[g]) {
      if (v >= n_ || group_of_[v] != groups_.size()) throw InputError("variable groups must partition the unknowns");
      group_of_[v] = g;
    }
  }
  for (auto g : group_of_) {
    if (g == groups_.size()) throw InputError("variable groups must partition the unknowns");
  }
  target_ = CompiledSystem(homogenize(target, groups_));
  const std::size_t G = groups_.size();
  patches_ = CMat::Zero(static_cast<Eigen::Index>(G), static_cast<Eigen::Index>(n_ + G));
  for (std::size_t g = 0; g < G; ++g) {
    for (auto v : groups_[g]) patches_(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(v)) = rng.coefficient();
    patches_(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(n_ + g)) = rng.coefficient();
  }
}

std::unique_ptr<HomotopyEvaluator> ProjectiveHomotopy::make_evaluator() const {
  return std::make_unique<ProjectiveEvaluator>(*this);
}

CVec ProjectiveHomotopy::start_point(std::size_t index) const {
  CVec z = start_->start_point(index);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const Complex s = patches_.row(static_cast<Eigen::Index>(g)) * z;
    for (auto v : groups_[g]) z(static_cast<Eigen::Index>(v)) /= s;
    z(static_cast<Eigen::Index>(n_ + g)) /= s;
  }
  return z;
}

CVec ProjectiveHomotopy::dehomogenize(const CVec& z) const {
  CVec x(static_cast<Eigen::Index>(n_));
  for (std::size_t v = 0; v < n_; ++v) {
    x(static_cast<Eigen::Index>(v)) = z(static_cast<Eigen::Index>(v)) / z(static_cast<Eigen::Index>(n_ + group_of_[v]));
  }
  return x;
}

double ProjectiveHomotopy::affine_norm(const CVec& z) const {
  double norm = 0.0;
  for (std::size_t v = 0; v < n_; ++v) {
    const double h = std::abs(z(static_cast<Eigen::Index>(n_ + group_of_[v])));
    const double a = std::abs(z(static_cast<Eigen::Index>(v)));
    if (h == 0.0) {
      if (a > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    norm = std::max(norm, a / h);
  }
  return norm;
}

}  // namespace critlimit
