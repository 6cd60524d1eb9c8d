#include "critlimit/pointset.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace critlimit {

PointSet::PointSet(std::vector<Atom> atoms, double cluster_radius) : atoms_(std::move(atoms)), radius_(cluster_radius) {
  for (const auto& a : atoms_) {
    if (a.multiplicity < 1) throw InputError("atom multiplicities must be positive");
  }
}

std::size_t PointSet::cardinality() const {
  std::size_t total = 0;
  for (const auto& a : atoms_) total += static_cast<std::size_t>(a.multiplicity);
  return total;
}

int PointSet::multiplicity_at(const CVec& p, double tol) const {
  for (const auto& a : atoms_) {
    if (a.point.size() == p.size() && (a.point - p).norm() <= tol) return a.multiplicity;
  }
  return 0;
}

double PointSet::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) best = std::min(best, (atoms_[i].point - atoms_[j].point).norm());
  }
  return best;
}

PointSet PointSet::scaled(int n) const {
  if (n < 0) throw InputError("negative multiplicity factor");
  if (n == 0) return PointSet({}, radius_);
  auto atoms = atoms_;
  for (auto& a : atoms) a.multiplicity *= n;
  return PointSet(std::move(atoms), radius_);
}

bool lex_less(const CVec& a, const CVec& b) {
  const auto n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return a.size() < b.size();
}

void PointSet::canonicalize() {
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return lex_less(x.point, y.point); });
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Groups weighted points by linkage at `link`, then merges centroids within `merge`.
std::vector<Atom> link_clusters(std::span<const CVec> points, std::span<const int> weights, double link, double merge) {
  const std::size_t n = points.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((points[i] - points[j]).norm() <= link) uf.unite(i, j);
    }
  }
  std::vector<Atom> atoms;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    if (slot[root] == n) {
      slot[root] = atoms.size();
      atoms.push_back({CVec::Zero(points[i].size()), 0});
    }
    auto& a = atoms[slot[root]];
    const int w = weights.empty() ? 1 : weights[i];
    a.point += double(w) * points[i];
    a.multiplicity += w;
  }
  for (auto& a : atoms) a.point /= double(a.multiplicity);

  // Centroids of distinct components can still sit close together when a
  // component is a long chain.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < atoms.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < atoms.size() && !merged; ++j) {
        if ((atoms[i].point - atoms[j].point).norm() <= merge) {
          const double wi = atoms[i].multiplicity, wj = atoms[j].multiplicity;
          atoms[i].point = (wi * atoms[i].point + wj * atoms[j].point) / (wi + wj);
          atoms[i].multiplicity += atoms[j].multiplicity;
          atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
      }
    }
  }
  return atoms;
}

// Injective matching of B's atoms into A's atoms along admissible edges.
bool match_atoms(const std::vector<Atom>& A, const std::vector<Atom>& B, double tol, bool equal) {
  if (B.size() > A.size() || (equal && A.size() != B.size())) return false;
  auto admissible = [&](std::size_t b, std::size_t a) {
    if (A[a].point.size() != B[b].point.size()) return false;
    if ((A[a].point - B[b].point).norm() > tol) return false;
    return equal ? A[a].multiplicity == B[b].multiplicity : A[a].multiplicity >= B[b].multiplicity;
  };

  // Greedy nearest first.
  std::vector<bool> used(A.size(), false);
  bool greedy_ok = true;
  for (std::size_t b = 0; b < B.size() && greedy_ok; ++b) {
    std::size_t best = A.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < A.size(); ++a) {
      if (used[a] || !admissible(b, a)) continue;
      const double d = (A[a].point - B[b].point).norm();
      if (d < best_d) {
        best_d = d;
        best = a;
      }
    }
    if (best == A.size()) {
      greedy_ok = false;
    } else {
      used[best] = true;
    }
  }
  if (greedy_ok) return true;

  // Augmenting paths (Kuhn).
  std::vector<std::size_t> owner(A.size(), B.size());
  for (std::size_t b = 0; b < B.size(); ++b) {
    std::vector<bool> seen(A.size(), false);
    auto augment = [&](auto&& self, std::size_t v) -> bool {
      for (std::size_t a = 0; a < A.size(); ++a) {
        if (seen[a] || !admissible(v, a)) continue;
        seen[a] = true;
        if (owner[a] == B.size() || self(self, owner[a])) {
          owner[a] = v;
          return true;
        }
      }
      return false;
    };
    if (!augment(augment, b)) return false;
  }
  return true;
}

std::vector<Atom> recluster(const PointSet& M, double tol) {
  std::vector<CVec> pts;
  std::vector<int> w;
  for (const auto& a : M.atoms()) {
    pts.push_back(a.point);
    w.push_back(a.multiplicity);
  }
  return link_clusters(pts, w, tol, tol);
}

}  // namespace

Clustering cluster_points(std::span<const CVec> points, double radius, std::span<const int> weights) {
  if (!(radius > 0.0)) throw InputError("cluster radius must be positive");
  if (!weights.empty() && weights.size() != points.size()) throw InputError("weights do not match points");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].size() != points[0].size()) throw InputError("points of different dimensions");
  }
  Clustering out;
  PointSet coarse(link_clusters(points, weights, radius, 2.0 * radius), radius);
  PointSet fine(link_clusters(points, weights, radius / 10.0, radius / 5.0), radius / 10.0);
  coarse.canonicalize();
  fine.canonicalize();
  out.chain_ambiguous = fine.size() != coarse.size();
  out.set = std::move(coarse);
  if (out.chain_ambiguous) out.fine = std::move(fine);
  return out;
}

PointSet cluster(std::span<const CVec> points, double radius) { return cluster_points(points, radius).set; }

PointSet sum(std::span<const PointSet> sets, double radius) {
  std::vector<CVec> pts;
  std::vector<int> w;
  for (const auto& s : sets) {
    for (const auto& a : s.atoms()) {
      pts.push_back(a.point);
      w.push_back(a.multiplicity);
    }
  }
  if (pts.empty()) return PointSet({}, radius);
  return cluster_points(pts, radius, w).set;
}

bool multiset_geq(const PointSet& A, const PointSet& B, double tol) {
  return match_atoms(recluster(A, tol), recluster(B, tol), tol, false);
}

bool multiset_equal(const PointSet& A, const PointSet& B, double tol) {
  return match_atoms(recluster(A, tol), recluster(B, tol), tol, true);
}

PointSet pushforward(const std::function<CVec(const CVec&)>& phi, const PointSet& M, double radius) {
  const double r = radius > 0.0 ? radius : M.cluster_radius();
  if (M.empty()) return PointSet({}, r);
  std::vector<CVec> pts;
  std::vector<int> w;
  for (const auto& a : M.atoms()) {
    pts.push_back(phi(a.point));
    w.push_back(a.multiplicity);
  }
  if (!(r > 0.0)) {
    // No scale to cluster at: merge exact coincidences only.
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      auto it = std::find_if(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.point == pts[i]; });
      if (it == atoms.end()) {
        atoms.push_back({pts[i], w[i]});
      } else {
        it->multiplicity += w[i];
      }
    }
    PointSet out(std::move(atoms), 0.0);
    out.canonicalize();
    return out;
  }
  return cluster_points(pts, r, w).set;
}

PointSet pushforward(std::span<const Polynomial> phi, const PointSet& M, double radius) {
  return pushforward(
      [&](const CVec& x) {
        std::vector<Complex> pt(x.data(), x.data() + x.size());
        CVec y(static_cast<Eigen::Index>(phi.size()));
        for (std::size_t i = 0; i < phi.size(); ++i) y(static_cast<Eigen::Index>(i)) = phi[i].evaluate(pt);
        return y;
      },
      M, radius);
}

}  // namespace critlimit
