#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "critlimit/types.hpp"

namespace critlimit {

/// Coefficients whose modulus falls below this after arithmetic are dropped.
inline constexpr double kZeroDrop = 1e-14;

/// Largest exponent accepted by the parser and by multiplication.
inline constexpr unsigned kMaxExponent = 0xFFFF;

/// Ordered list of distinct identifiers; the column order of every exponent vector.
class VariableTable {
 public:
  VariableTable() = default;
  explicit VariableTable(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<std::size_t> find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  /// Index of a declared name; throws InputError otherwise.
  std::size_t index(std::string_view name) const;

  /// Appends a new identifier and returns its index.
  std::size_t add(std::string name);

  /// Returns `base` if unused, otherwise `base_1`, `base_2`, ...
  std::string fresh_name(const std::string& base) const;

  bool operator==(const VariableTable& other) const { return names_ == other.names_; }

  static bool is_identifier(std::string_view text);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

/// Sparse multivariate polynomial with complex double coefficients.
///
/// Terms are kept in a map from dense exponent vectors to coefficients. Every
/// arithmetic operation re-normalizes: coefficients with modulus below
/// kZeroDrop are removed, so `terms()` never holds a zero.
class Polynomial {
 public:
  using Exponent = std::vector<std::uint16_t>;
  using TermMap = std::map<Exponent, Complex>;

  explicit Polynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, Complex value);
  static Polynomial variable(std::size_t num_vars, std::size_t var);
  static Polynomial monomial(Exponent exponent, Complex coefficient);

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  const TermMap& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;
  Complex constant_term() const;
  Complex coefficient(const Exponent& exponent) const;

  /// -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(std::size_t var) const;
  /// Largest sum of exponents over the listed variables.
  int degree_in(std::span<const std::size_t> vars) const;

  /// Adds `coefficient * x^exponent` in place.
  void add_term(const Exponent& exponent, Complex coefficient);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(Complex scalar);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }
  Polynomial operator-() const;

  Polynomial pow(unsigned exponent) const;

  Complex evaluate(std::span<const Complex> point) const;
  Polynomial differentiate(std::size_t var) const;

  /// Replaces each variable with the matching image and expands. Images all
  /// live in one target ring; `images.size()` must equal num_vars().
  Polynomial compose(std::span<const Polynomial> images, std::size_t target_vars) const;

  /// Substitutes the bound variables within the same ring.
  Polynomial substitute(const std::map<std::size_t, Polynomial>& bindings) const;

  /// Re-indexes into a ring with `target_vars` variables; variable i maps to index_map[i].
  Polynomial embed(std::span<const std::size_t> index_map, std::size_t target_vars) const;

  /// Exact term-by-term equality.
  bool operator==(const Polynomial& other) const {
    return num_vars_ == other.num_vars_ && terms_ == other.terms_;
  }

  /// Maximum coefficient difference over the union of supports.
  double distance(const Polynomial& other) const;

 private:
  void prune();

  std::size_t num_vars_;
  TermMap terms_;
};

/// Renders with 17 significant digits so that parsing the result reproduces
/// every coefficient bit for bit.
std::string to_string(const Polynomial& p, const VariableTable& vars);

/// Parses an expression; throws ParseError on malformed input.
Polynomial parse_polynomial(std::string_view text, const VariableTable& vars);

/// Equations over a shared variable table, with the unknowns and an optional parameter marked.
struct PolySystem {
  VariableTable vars;
  std::vector<Polynomial> equations;
  std::vector<std::size_t> unknowns;
  std::optional<std::size_t> parameter;

  std::size_t num_equations() const noexcept { return equations.size(); }
  std::size_t num_unknowns() const noexcept { return unknowns.size(); }
  bool is_square() const noexcept { return equations.size() == unknowns.size(); }
};

/// entry (i, j) = d equation_i / d variable wrt[j].
std::vector<std::vector<Polynomial>> jacobian(const PolySystem& sys, std::span<const std::size_t> wrt);

}  // namespace critlimit
