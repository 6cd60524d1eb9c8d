#include "critlimit/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace critlimit {

// ---------------------------------------------------------------------------
// VariableTable

VariableTable::VariableTable(std::vector<std::string> names) {
  for (auto& n : names) add(std::move(n));
}

bool VariableTable::is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto head = static_cast<unsigned char>(text.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(text.begin() + 1, text.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

std::optional<std::size_t> VariableTable::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t VariableTable::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw InputError("undeclared variable '" + std::string(name) + "'");
}

std::size_t VariableTable::add(std::string name) {
  if (!is_identifier(name)) throw InputError("invalid identifier '" + name + "'");
  if (lookup_.count(name)) throw InputError("duplicate variable '" + name + "'");
  lookup_.emplace(name, names_.size());
  names_.push_back(std::move(name));
  return names_.size() - 1;
}

std::string VariableTable::fresh_name(const std::string& base) const {
  if (!contains(base)) return base;
  for (int k = 1;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!contains(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Polynomial

namespace {

int exponent_sum(const Polynomial::Exponent& e) {
  int s = 0;
  for (auto v : e) s += v;
  return s;
}

Polynomial::Exponent add_exponents(const Polynomial::Exponent& a, const Polynomial::Exponent& b) {
  Polynomial::Exponent out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    unsigned s = unsigned(a[i]) + unsigned(b[i]);
    if (s > kMaxExponent) throw InputError("exponent overflow (limit 65535)");
    out[i] = static_cast<std::uint16_t>(s);
  }
  return out;
}

Complex int_pow(Complex base, unsigned e) {
  Complex result(1.0, 0.0);
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

}  // namespace

Polynomial Polynomial::constant(std::size_t num_vars, Complex value) {
  Polynomial p(num_vars);
  p.add_term(Exponent(num_vars, 0), value);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t var) {
  if (var >= num_vars) throw InputError("variable index out of range");
  Exponent e(num_vars, 0);
  e[var] = 1;
  return monomial(std::move(e), 1.0);
}

Polynomial Polynomial::monomial(Exponent exponent, Complex coefficient) {
  Polynomial p(exponent.size());
  p.add_term(exponent, coefficient);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && exponent_sum(terms_.begin()->first) == 0);
}

Complex Polynomial::constant_term() const { return coefficient(Exponent(num_vars_, 0)); }

Complex Polynomial::coefficient(const Exponent& exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, exponent_sum(e));
  return d;
}

int Polynomial::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, int(e.at(var)));
  return d;
}

int Polynomial::degree_in(std::span<const std::size_t> vars) const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (auto v : vars) s += e.at(v);
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Exponent& exponent, Complex coefficient) {
  if (exponent.size() != num_vars_) throw InputError("exponent length does not match variable count");
  auto [it, inserted] = terms_.try_emplace(exponent, coefficient);
  if (!inserted) it->second += coefficient;
  if (std::abs(it->second) < kZeroDrop) terms_.erase(it);
}

void Polynomial::prune() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kZeroDrop; });
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.num_vars_ != num_vars_) throw InputError("polynomials live in different rings");
  for (const auto& [e, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) it->second += c;
  }
  prune();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.num_vars_ != num_vars_) throw InputError("polynomials live in different rings");
  for (const auto& [e, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, -c);
    if (!inserted) it->second -= c;
  }
  prune();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw InputError("polynomials live in different rings");
  Polynomial out(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      auto [it, inserted] = out.terms_.try_emplace(add_exponents(ea, eb), ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  out.prune();
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial& Polynomial::operator*=(Complex scalar) {
  for (auto& [e, c] : terms_) c *= scalar;
  prune();
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(*this);
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result = constant(num_vars_, 1.0);
  Polynomial base = *this;
  while (exponent) {
    if (exponent & 1u) result *= base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

Complex Polynomial::evaluate(std::span<const Complex> point) const {
  if (point.size() != num_vars_) {
    throw InputError("evaluation point has " + std::to_string(point.size()) + " coordinates, expected " +
                     std::to_string(num_vars_));
  }
  Complex sum(0.0);
  for (const auto& [e, c] : terms_) {
    Complex term = c;
    for (std::size_t v = 0; v < num_vars_; ++v) {
      if (e[v]) term *= int_pow(point[v], e[v]);
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::differentiate(std::size_t var) const {
  if (var >= num_vars_) throw InputError("variable index out of range");
  Polynomial out(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    out.add_term(d, c * double(e[var]));
  }
  return out;
}

Polynomial Polynomial::compose(std::span<const Polynomial> images, std::size_t target_vars) const {
  if (images.size() != num_vars_) throw InputError("composition needs one image per variable");
  for (const auto& img : images) {
    if (img.num_vars() != target_vars) throw InputError("composition images live in different rings");
  }
  // powers[v][k] = images[v]^k, filled lazily
  std::vector<std::vector<Polynomial>> powers(num_vars_);
  auto power_of = [&](std::size_t v, unsigned k) -> const Polynomial& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(constant(target_vars, 1.0));
    while (cache.size() <= k) cache.push_back(cache.back() * images[v]);
    return cache[k];
  };
  Polynomial out(target_vars);
  for (const auto& [e, c] : terms_) {
    Polynomial term = constant(target_vars, c);
    for (std::size_t v = 0; v < num_vars_; ++v) {
      if (e[v]) term *= power_of(v, e[v]);
    }
    out += term;
  }
  return out;
}

Polynomial Polynomial::substitute(const std::map<std::size_t, Polynomial>& bindings) const {
  std::vector<Polynomial> images;
  images.reserve(num_vars_);
  for (std::size_t v = 0; v < num_vars_; ++v) {
    auto it = bindings.find(v);
    images.push_back(it == bindings.end() ? variable(num_vars_, v) : it->second);
  }
  return compose(images, num_vars_);
}

Polynomial Polynomial::embed(std::span<const std::size_t> index_map, std::size_t target_vars) const {
  if (index_map.size() != num_vars_) throw InputError("embedding map has the wrong length");
  Polynomial out(target_vars);
  for (const auto& [e, c] : terms_) {
    Exponent t(target_vars, 0);
    for (std::size_t v = 0; v < num_vars_; ++v) {
      if (e[v] == 0) continue;
      auto target = index_map[v];
      if (target >= target_vars) throw InputError("embedding target out of range");
      unsigned s = unsigned(t[target]) + e[v];
      if (s > kMaxExponent) throw InputError("exponent overflow (limit 65535)");
      t[target] = static_cast<std::uint16_t>(s);
    }
    out.add_term(t, c);
  }
  return out;
}

double Polynomial::distance(const Polynomial& other) const {
  double d = 0.0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::abs(c - other.coefficient(e)));
  for (const auto& [e, c] : other.terms_) {
    if (!terms_.count(e)) d = std::max(d, std::abs(c));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Coefficient text without a leading sign decision; used for the magnitude part.
std::string format_coefficient(Complex c, bool imaginary_allowed) {
  if (c.imag() == 0.0) return format_double(c.real());
  if (!imaginary_allowed) {
    throw InputError("cannot print a non-real coefficient when 'i' is a declared variable");
  }
  std::string out = "(" + format_double(c.real());
  out += c.imag() < 0 ? "-" : "+";
  out += format_double(std::abs(c.imag())) + "*i)";
  return out;
}

}  // namespace

std::string to_string(const Polynomial& p, const VariableTable& vars) {
  if (vars.size() != p.num_vars()) throw InputError("variable table does not match polynomial");
  if (p.is_zero()) return "0";
  const bool imaginary_allowed = !vars.contains("i");

  std::vector<std::pair<const Polynomial::Exponent*, Complex>> order;
  for (const auto& [e, c] : p.terms()) order.emplace_back(&e, c);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    int da = exponent_sum(*a.first), db = exponent_sum(*b.first);
    if (da != db) return da > db;
    return *a.first > *b.first;
  });

  std::string out;
  bool first = true;
  for (const auto& [ep, coeff] : order) {
    const auto& e = *ep;
    Complex c = coeff;
    bool negative = c.imag() == 0.0 && c.real() < 0.0;
    if (negative) c = -c;

    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;

    std::string mono;
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (!e[v]) continue;
      if (!mono.empty()) mono += "*";
      mono += vars.name(v);
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    if (mono.empty()) {
      out += format_coefficient(c, imaginary_allowed);
    } else if (c == Complex(1.0, 0.0)) {
      out += mono;
    } else {
      out += format_coefficient(c, imaginary_allowed) + "*" + mono;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t{Tok::End, pos_, {}};
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    auto uc = static_cast<unsigned char>(c);
    if (std::isdigit(uc) || c == '.') return number();
    if (std::isalpha(uc) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      t.kind = Tok::Ident;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    ++pos_;
    switch (c) {
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", t.pos);
    }
    t.text = src_.substr(t.pos, 1);
    return t;
  }

 private:
  // digits [. digits] [e [+-] digits] | . digits [exponent]
  Token number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        // "2e" followed by something else is a number then an identifier.
        pos_ = save;
      }
    }
    Token t{Tok::Number, start, src_.substr(start, pos_ - start)};
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
      throw ParseError("malformed number", start);
    }
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, const VariableTable& vars)
      : lex_(src), vars_(vars), n_(vars.size()), imaginary_(!vars.contains("i")) {
    advance();
  }

  Polynomial parse() {
    Polynomial p = expr();
    if (cur_.kind != Tok::End) unexpected();
    return p;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void unexpected() const {
    if (cur_.kind == Tok::End) throw ParseError("unexpected end of expression", cur_.pos);
    throw ParseError("unexpected token '" + std::string(cur_.text) + "'", cur_.pos);
  }

  static bool starts_operand(Tok k) { return k == Tok::Number || k == Tok::Ident || k == Tok::LParen; }

  Polynomial expr() {
    Polynomial acc = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      bool minus = cur_.kind == Tok::Minus;
      advance();
      Polynomial rhs = term();
      if (minus) acc -= rhs;
      else acc += rhs;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      if (cur_.kind == Tok::Star) {
        advance();
        acc *= factor();
      } else if (cur_.kind == Tok::Slash) {
        advance();
        if (cur_.kind != Tok::Number) throw ParseError("division is only allowed by a numeric literal", cur_.pos);
        if (cur_.number == 0.0) throw ParseError("division by zero", cur_.pos);
        acc *= Complex(1.0 / cur_.number);
        advance();
      } else if (starts_operand(cur_.kind)) {
        throw ParseError("implicit multiplication is not supported; use '*'", cur_.pos);
      } else {
        return acc;
      }
    }
  }

  Polynomial factor() {
    if (cur_.kind == Tok::Minus) {
      advance();
      return -factor();
    }
    if (cur_.kind == Tok::Plus) {
      advance();
      return factor();
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (cur_.kind != Tok::Caret) return base;
    advance();
    if (cur_.kind != Tok::Number || cur_.text.find_first_not_of("0123456789") != std::string_view::npos) {
      throw ParseError("exponent must be a nonnegative integer literal", cur_.pos);
    }
    unsigned long e = 0;
    auto res = std::from_chars(cur_.text.data(), cur_.text.data() + cur_.text.size(), e);
    if (res.ec != std::errc() || e > kMaxExponent) throw ParseError("exponent too large (limit 65535)", cur_.pos);
    advance();
    if (cur_.kind == Tok::Caret) throw ParseError("chained exponentiation is ambiguous; add parentheses", cur_.pos);
    return base.pow(static_cast<unsigned>(e));
  }

  Polynomial primary() {
    switch (cur_.kind) {
      case Tok::Number: {
        auto p = Polynomial::constant(n_, cur_.number);
        advance();
        return p;
      }
      case Tok::Ident: {
        std::string_view name = cur_.text;
        if (auto idx = vars_.find(name)) {
          advance();
          return Polynomial::variable(n_, *idx);
        }
        if (name == "i" && imaginary_) {
          advance();
          return Polynomial::constant(n_, Complex(0.0, 1.0));
        }
        throw ParseError("undeclared identifier '" + std::string(name) + "'", cur_.pos);
      }
      case Tok::LParen: {
        advance();
        Polynomial p = expr();
        if (cur_.kind != Tok::RParen) throw ParseError("expected ')'", cur_.pos);
        advance();
        return p;
      }
      default:
        unexpected();
    }
  }

  Lexer lex_;
  const VariableTable& vars_;
  std::size_t n_;
  bool imaginary_;
  Token cur_{Tok::End, 0, {}};
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const VariableTable& vars) {
  return Parser(text, vars).parse();
}

std::vector<std::vector<Polynomial>> jacobian(const PolySystem& sys, std::span<const std::size_t> wrt) {
  std::vector<std::vector<Polynomial>> out;
  out.reserve(sys.equations.size());
  for (const auto& eq : sys.equations) {
    std::vector<Polynomial> row;
    row.reserve(wrt.size());
    for (auto v : wrt) row.push_back(eq.differentiate(v));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace critlimit
