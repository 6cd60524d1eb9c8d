#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "critlimit/poly.hpp"

namespace critlimit {

struct Atom {
  CVec point;
  int multiplicity = 1;
};

/// A finite set of points with positive integer multiplicities.
class PointSet {
 public:
  PointSet() = default;
  /// Takes the atoms as given; use cluster() to build from raw points.
  PointSet(std::vector<Atom> atoms, double cluster_radius);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double cluster_radius() const noexcept { return radius_; }
  bool empty() const noexcept { return atoms_.empty(); }
  std::size_t size() const noexcept { return atoms_.size(); }

  /// Total mass.
  std::size_t cardinality() const;
  /// Multiplicity of the atom within tol of p, or 0.
  int multiplicity_at(const CVec& p, double tol) const;
  /// Smallest distance between two representatives; +inf below two atoms.
  double min_separation() const;

  /// Every multiplicity times n (n = 0 gives the empty set).
  PointSet scaled(int n) const;

  /// Sorts atoms lexicographically on (re, im) coordinate pairs.
  void canonicalize();

 private:
  std::vector<Atom> atoms_;
  double radius_ = 0.0;
};

/// Lexicographic order on (re, im) coordinate pairs.
bool lex_less(const CVec& a, const CVec& b);

struct Clustering {
  PointSet set;
  /// The clustering at radius / 10 has a different number of atoms.
  bool chain_ambiguous = false;
  std::optional<PointSet> fine;
};

/// Single-linkage clustering: points within `radius` are linked, each
/// component becomes one atom at its weighted centroid. Atoms whose centroids
/// lie within 2 * radius are merged afterwards.
Clustering cluster_points(std::span<const CVec> points, double radius, std::span<const int> weights = {});

PointSet cluster(std::span<const CVec> points, double radius);

/// The union of the atoms of all sets, re-clustered at `radius`.
PointSet sum(std::span<const PointSet> sets, double radius);

/// Every atom of B matches a distinct atom of A within tol whose multiplicity is at least as large.
bool multiset_geq(const PointSet& A, const PointSet& B, double tol);

/// Matching within tol with equal multiplicities, after re-clustering both sides at tol.
bool multiset_equal(const PointSet& A, const PointSet& B, double tol);

/// Image of every atom, re-clustered at M's radius (or `radius` when positive).
PointSet pushforward(const std::function<CVec(const CVec&)>& phi, const PointSet& M, double radius = 0.0);
PointSet pushforward(std::span<const Polynomial> phi, const PointSet& M, double radius = 0.0);

inline std::size_t cardinality(const PointSet& M) { return M.cardinality(); }

}  // namespace critlimit
