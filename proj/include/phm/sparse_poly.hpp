#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "phm/rational.hpp"

namespace phm {

inline constexpr std::size_t kMaxVariables = 4;
inline constexpr unsigned kMaxExponent = 0xFFFF;

// Exponent vector packed into 16-bit fields, variable 0 in the most
// significant field, so integer comparison of the packed word is lex order.
class Monomial {
 public:
  constexpr Monomial() = default;

  static Monomial from_exponents(std::span<const unsigned> exponents);
  static Monomial unit(std::size_t var, unsigned power = 1);

  unsigned exponent(std::size_t var) const {
    return static_cast<unsigned>((bits_ >> shift(var)) & kMaxExponent);
  }
  unsigned total_degree() const;
  bool is_one() const { return bits_ == 0; }
  std::uint64_t packed() const { return bits_; }

  Monomial with_exponent(std::size_t var, unsigned e) const;
  bool divides(Monomial other) const;

  /// Throws std::overflow_error when an exponent leaves 16 bits.
  friend Monomial operator*(Monomial a, Monomial b);
  /// Pre: b divides a.
  friend Monomial operator/(Monomial a, Monomial b);

  friend bool operator==(Monomial a, Monomial b) { return a.bits_ == b.bits_; }
  /// Graded lexicographic order.
  friend std::strong_ordering operator<=>(Monomial a, Monomial b) {
    const unsigned da = a.total_degree();
    const unsigned db = b.total_degree();
    if (da != db) return da <=> db;
    return a.bits_ <=> b.bits_;
  }

 private:
  static constexpr unsigned shift(std::size_t var) {
    return static_cast<unsigned>(16 * (kMaxVariables - 1 - var));
  }
  std::uint64_t bits_ = 0;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in descending graded-lex order, with no zero coefficients.
/// Every polynomial carries its ordered variable names; binary operations
/// require identical names, except that a polynomial with no variables
/// (a bare constant) adopts the other operand's names.
class SparsePoly {
 public:
  using TermMap = std::map<Monomial, Rational, std::greater<>>;

  SparsePoly() = default;
  explicit SparsePoly(std::vector<std::string> vars);
  SparsePoly(std::vector<std::string> vars, const Rational& constant);

  static SparsePoly variable(std::vector<std::string> vars, std::size_t index);
  static SparsePoly monomial(std::vector<std::string> vars, Monomial m, const Rational& c);
  /// Parses expressions built from rational literals, the given variable
  /// names, + - * ^ and parentheses. Division is accepted only by constants.
  static SparsePoly parse(std::string_view text, std::vector<std::string> vars);

  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t num_variables() const { return vars_.size(); }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Rational coefficient(Monomial m) const;

  /// Pre: nonzero.
  Monomial leading_monomial() const { return terms_.begin()->first; }
  const Rational& leading_coefficient() const { return terms_.begin()->second; }

  unsigned degree_in(std::size_t var) const;
  unsigned total_degree() const;
  /// Smallest total degree among the terms (0 for the zero polynomial).
  unsigned lowest_total_degree() const;
  bool involves(std::size_t var) const { return degree_in(var) > 0; }

  Rational evaluate(std::span<const Rational> point) const;
  template <class T>
  T evaluate_as(std::span<const T> point) const;

  SparsePoly derivative(std::size_t var) const;
  /// Replaces variable `var` by `value` (same variable list).
  SparsePoly substitute(std::size_t var, const SparsePoly& value) const;
  SparsePoly substitute(std::size_t var, const Rational& value) const;
  /// Simultaneous substitution of every variable; `values` may live over a
  /// different variable list.
  SparsePoly compose(std::span<const SparsePoly> values) const;
  /// Coefficients of the powers of `var`, index = power; each coefficient
  /// keeps the full variable list but does not involve `var`.
  std::vector<SparsePoly> coefficients_in(std::size_t var) const;

  SparsePoly renamed(std::vector<std::string> vars) const;
  /// Result variable i carries the exponent of old variable perm[i].
  SparsePoly permuted(std::span<const std::size_t> perm) const;
  /// Multiplies by var^k.
  SparsePoly shifted(std::size_t var, unsigned k) const;

  /// Positive rational c such that *this / c has coprime integer coefficients.
  Rational content() const;
  /// Integer primitive associate with positive leading coefficient.
  SparsePoly primitive() const;
  /// Associate with leading coefficient 1.
  SparsePoly monic() const;
  bool has_integer_coefficients() const;

  std::string str() const;
  /// Sorted terms, every variable written with an explicit exponent.
  std::string canonical() const;

  void add_term(Monomial m, const Rational& c);

  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly& operator-=(const SparsePoly& o);
  SparsePoly& operator*=(const SparsePoly& o);
  SparsePoly& operator*=(const Rational& c);
  SparsePoly& operator/=(const Rational& c);

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
  friend SparsePoly operator*(SparsePoly a, const Rational& c) { return a *= c; }
  friend SparsePoly operator*(const Rational& c, SparsePoly a) { return a *= c; }
  friend SparsePoly operator/(SparsePoly a, const Rational& c) { return a /= c; }
  friend SparsePoly operator-(SparsePoly a);
  friend bool operator==(const SparsePoly& a, const SparsePoly& b);

  SparsePoly pow(unsigned e) const;

 private:
  const std::vector<std::string>& merged_vars(const SparsePoly& o) const;

  std::vector<std::string> vars_;
  TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const SparsePoly& p);

long double to_long_double(const Rational& r);

template <class T>
T rational_to(const Rational& r) {
  if constexpr (std::is_same_v<T, long double>) {
    return to_long_double(r);
  } else {
    return T(to_long_double(r));
  }
}

template <class T>
T SparsePoly::evaluate_as(std::span<const T> point) const {
  T acc{};
  for (const auto& [m, c] : terms_) {
    T term = rational_to<T>(c);
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      for (unsigned k = m.exponent(v); k > 0; --k) term *= point[v];
    }
    acc += term;
  }
  return acc;
}

}  // namespace phm
