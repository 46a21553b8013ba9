#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "phm/exact_poly.hpp"
#include "phm/rational.hpp"
#include "phm/sparse_poly.hpp"

namespace phm {

// Base charts of P1 x P1 and the two charts covering each exceptional
// divisor of the blow-up at p1 = (1,1), p2 = (inf,0), p3 = (0,inf).
enum class Chart {
  XY,   // (x, y)
  UY,   // (u, y) = (1/x, y)
  XV,   // (x, v) = (x, 1/y)
  UV,   // (u, v) = (1/x, 1/y)
  AM1,  // (a, m1) = (x - 1, (y - 1)/(x - 1))
  BN1,  // (b, n1) = (y - 1, (x - 1)/(y - 1))
  UM2,  // (u, m2) = (u, y/u)
  YN2,  // (y, n2) = (y, u/y)
  VM3,  // (v, m3) = (v, x/v)
  XN3,  // (x, n3) = (x, v/x)
};

inline constexpr std::array<Chart, 4> kBaseCharts{Chart::XY, Chart::UY, Chart::XV, Chart::UV};

std::string chart_name(Chart c);
std::vector<std::string> chart_variables(Chart c);
bool is_base_chart(Chart c);

using Factor = std::pair<SparsePoly, unsigned>;
using FactorList = std::vector<Factor>;

/// Reduced quotient unit * prod(num) / prod(den). Factors are integer
/// primitive with positive leading coefficient, pairwise coprime across the
/// two lists; the expanded numerator carries the unit, the expanded
/// denominator is primitive.
class RatFunc {
 public:
  RatFunc() = default;
  /// Cancels until numerator and denominator factors are coprime.
  /// Throws std::domain_error if a denominator factor is zero.
  RatFunc(Rational unit, FactorList num, FactorList den, std::vector<std::string> vars);
  static RatFunc from_polys(const SparsePoly& num, const SparsePoly& den);
  static RatFunc constant(const Rational& c, std::vector<std::string> vars);

  const std::vector<std::string>& variables() const { return vars_; }
  const Rational& unit() const { return unit_; }
  const FactorList& num_factors() const { return num_; }
  const FactorList& den_factors() const { return den_; }
  const SparsePoly& numerator() const { return num_poly_; }
  const SparsePoly& denominator() const { return den_poly_; }
  bool is_zero() const { return num_poly_.is_zero(); }

  RatFunc reciprocal() const;
  /// Equality as rational functions (cross multiplication).
  bool same_function(const RatFunc& o) const;
  /// Renames/permutes variables (see SparsePoly::permuted).
  RatFunc permuted(std::span<const std::size_t> perm) const;
  RatFunc substitute(std::size_t var, const Rational& value) const;
  RatFunc substitute(std::size_t var, const RatFunc& value) const;

  std::string str() const;

  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);

 private:
  void expand();
  std::vector<std::string> vars_;
  Rational unit_ = 1;
  FactorList num_;
  FactorList den_;
  SparsePoly num_poly_;
  SparsePoly den_poly_;
};

/// Rational map between two charts, component i gives target variable i.
struct PlaneMap {
  Chart source = Chart::XY;
  Chart target = Chart::XY;
  RatFunc comp1;
  RatFunc comp2;
  const RatFunc& comp(std::size_t i) const { return i == 0 ? comp1 : comp2; }
};

/// Defining factors of the heat map and the named curves.
namespace curves {
SparsePoly C1();
SparsePoly C2();
SparsePoly C3();
SparsePoly C4();
SparsePoly C5();
SparsePoly C6();
SparsePoly C7();
SparsePoly D6();  // x y^2 + 4xy + x - y - 5
SparsePoly D7();  // x^2 y + 4xy - x + y - 5
SparsePoly K1();  // xy - y - 3
SparsePoly K2();  // xy - x - 3
}  // namespace curves

/// The map H in the XY chart.
PlaneMap heat_map_xy();
/// H with source coordinates in `source` and target coordinates in `target`.
PlaneMap heat_map(Chart source, Chart target);
PlaneMap identity_map(Chart c);
/// Rewrites the factors of f over the given known polynomials where they divide.
RatFunc split_known(const RatFunc& f, std::span<const SparsePoly> known);
/// C1..C7, D6, D7, K1, K2 in the XY chart.
std::vector<SparsePoly> known_xy_factors();
/// Identity of the underlying surface written from one chart into another.
PlaneMap chart_change(Chart from, Chart to);
/// xy_to(target) o f o to_xy(source).
PlaneMap transport(const PlaneMap& f_xy, Chart source, Chart target);

struct CompositionLog {
  std::array<Bidegree, 2> unreduced_num{};
  std::array<Bidegree, 2> reduced_num{};
};

/// f o g, with every component cancelled to lowest terms.
/// Pre: g.target == f.source.
PlaneMap compose_reduce(const PlaneMap& f, const PlaneMap& g, CompositionLog* log = nullptr);

// Evaluation at exact points.
struct Finite {
  Rational x;
  Rational y;
  friend bool operator==(const Finite&, const Finite&) = default;
};
struct InfiniteComponent {
  std::vector<std::size_t> components;
};
struct Indeterminate {};
using EvalResult = std::variant<Finite, InfiniteComponent, Indeterminate>;

EvalResult evaluate(const PlaneMap& f, const Rational& s, const Rational& t);
/// True iff some component is 0/0 at the point after rewriting the target in
/// each of the four base charts.
bool indeterminate_in_all_charts(const PlaneMap& f_xy, const Rational& x, const Rational& y);

/// A point of P1 x P1 as a pair of P1 values; nullopt stands for infinity.
struct P1Point {
  std::optional<Rational> x;
  std::optional<Rational> y;
  friend bool operator==(const P1Point&, const P1Point&) = default;
};
/// Image of a finite XY point; nullopt when indeterminate.
std::optional<P1Point> evaluate_p1(const PlaneMap& f_xy, const Rational& x, const Rational& y);
std::string to_string(const P1Point& p);

struct CriticalFactor {
  std::string label;
  SparsePoly factor;
  unsigned exponent = 0;
};
struct CriticalFactors {
  std::vector<CriticalFactor> factors;  // positive exponents only
  SparsePoly residual;                  // of the XY-chart numerator
  bool residual_explained = false;      // constant after removing known denominator factors
};

/// Reduced numerator of the Jacobian determinant of a two-component map.
SparsePoly jacobian_numerator(const PlaneMap& f);
/// Critical curves among `candidates` for a map written in XY -> XY; the
/// exponent of a candidate is its largest vanishing order over the four base
/// target charts.
CriticalFactors jacobian_critical_factors(const PlaneMap& f_xy,
                                          const std::vector<std::pair<std::string, SparsePoly>>& candidates,
                                          const std::vector<SparsePoly>& allowed_residual_factors);

/// R o f == f o R for R(s, t) = (t, s), checked as rational-function identities.
bool check_reflection_symmetry(const PlaneMap& f);

class NonconstantResidual : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phm
