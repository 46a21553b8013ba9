#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phm/rational.hpp"
#include "phm/sparse_poly.hpp"

namespace phm {

/// Dense univariate polynomial over Q; coeffs()[k] multiplies t^k.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);
  static UPoly from_integers(const std::vector<long>& coeffs);
  /// Pre: p involves no variable other than `var`.
  static UPoly from_sparse(const SparsePoly& p, std::size_t var);
  SparsePoly to_sparse(const std::vector<std::string>& vars, std::size_t var) const;

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& leading() const { return c_.back(); }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

  Rational evaluate(const Rational& t) const;
  int sign_at(const Rational& t) const { return sgn(evaluate(t)); }
  std::complex<long double> evaluate(std::complex<long double> t) const;

  UPoly derivative() const;
  UPoly monic() const;
  /// Integer coefficients with gcd 1 and positive leading coefficient.
  UPoly primitive() const;
  /// Coefficients of t^n p(1/t).
  UPoly reversed() const;
  /// p(s * t).
  UPoly scaled(const Rational& s) const;

  UPoly& operator+=(const UPoly& o);
  UPoly& operator-=(const UPoly& o);
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(UPoly a, const Rational& s);
  friend bool operator==(const UPoly&, const UPoly&) = default;

  std::string str(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

struct DivMod {
  UPoly quotient;
  UPoly remainder;
};
DivMod divmod(const UPoly& a, const UPoly& b);
/// Monic gcd; gcd(0, 0) throws.
UPoly gcd(const UPoly& a, const UPoly& b);
UPoly squarefree_part(const UPoly& p);
std::optional<UPoly> exact_divide(const UPoly& a, const UPoly& b);

/// Bound B with every complex root of p strictly inside |t| < B.
Rational cauchy_bound(const UPoly& p);

/// Sturm sequence p, p', -rem(...), ...
std::vector<UPoly> sturm_sequence(const UPoly& p);
/// Number of distinct real roots in the half-open interval (lo, hi].
unsigned count_real_roots(const std::vector<UPoly>& sturm, const Rational& lo, const Rational& hi);

/// Real root of a squarefree polynomial inside (lo, hi]; exact when lo == hi.
struct RootInterval {
  Rational lo;
  Rational hi;
  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
};

/// Disjoint isolating intervals for all real roots, ascending.
std::vector<RootInterval> isolate_real_roots(const UPoly& p);
/// Bisects an isolating interval of squarefree p until width <= max_width or exact.
RootInterval refine(const UPoly& p, RootInterval r, const Rational& max_width);

/// All rational roots (distinct, ascending), each verified by exact evaluation.
std::vector<Rational> rational_roots(const UPoly& p);

/// Smallest-denominator fraction in the closed interval [lo, hi].
Rational simplest_between(Rational lo, Rational hi);

/// True iff every complex root lies strictly inside the unit disk (exact
/// Schur-Cohn recursion).
bool roots_inside_unit_disk(const UPoly& p);

/// Complex roots with multiplicity, companion-matrix eigenvalues polished by
/// Newton steps in long double.
std::vector<std::complex<long double>> numeric_roots(const UPoly& p);
/// Same for complex coefficients (ascending powers).
std::vector<std::complex<long double>> numeric_roots(const std::vector<std::complex<long double>>& coeffs);

class IsolationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest root modulus. `exact` is set when the radius is rational; otherwise
/// [lo, hi] brackets it with hi - lo < width.
struct SpectralRadius {
  std::optional<Rational> exact;
  Rational lo;
  Rational hi;
};
/// Throws IsolationFailure when the dominant root is non-real.
SpectralRadius spectral_radius(const UPoly& p, const Rational& width);

}  // namespace phm
