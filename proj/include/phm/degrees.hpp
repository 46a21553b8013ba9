#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phm/charts_map.hpp"
#include "phm/cohomology.hpp"
#include "phm/upoly.hpp"

namespace phm {

/// Integer polynomial in lambda, ascending coefficients.
struct IntPolynomial {
  std::vector<Integer> coeffs;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  UPoly to_upoly() const;
  std::string str(const std::string& var = "t") const;
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;
};

using IntegerMatrix = std::vector<std::vector<Integer>>;
IntegerMatrix to_integer_matrix(const IntMatrix& m);

/// det(t I - M) by Berkowitz's division-free algorithm.
IntPolynomial char_poly(const IntegerMatrix& m);
IntPolynomial char_poly(const IntMatrix& m);
/// p(M), exactly.
IntegerMatrix evaluate_at_matrix(const IntPolynomial& p, const IntegerMatrix& m);

/// Largest root modulus of p, rational when it can be certified so.
SpectralRadius spectral_radius_exact(const IntPolynomial& p, const Rational& width = Rational(1, 1000000000000L));

/// M (2,2,-1,-1,-1) == 4 (2,2,-1,-1,-1).
bool anticanonical_eigencheck(const IntMatrix& m);

/// Whether l1 divides l2.
bool fibration_divisibility(long l1, long l2);

struct DegreeGrowthRow {
  unsigned n = 0;
  Bidegree symbolic;   // first component numerator of the reduced n-th iterate
  Bidegree predicted;  // first two coordinates of M^n e1
  double seconds = 0;
};
/// Pre: 1 <= n_max <= 4.
std::vector<DegreeGrowthRow> degree_growth(unsigned n_max, const IntMatrix& m);

class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Preimage {
  std::complex<long double> x;
  std::complex<long double> y;
  long double residual = 0;
};
struct PreimageSample {
  Rational c1;
  Rational c2;
  int eliminant_degree = 0;  // degree of Res_y before stripping base points
  int stripped_degree = 0;
  std::vector<Preimage> preimages;
  long double max_residual = 0;
};

/// deg_x Res_y(N1 - c1 D1, N2 - c2 D2) with c1, c2 kept symbolic.
int generic_eliminant_degree(const PlaneMap& f);
/// Preimages of (c1, c2) under a map written XY -> XY, by elimination of y.
/// Throws DegenerateSample for non-generic targets, including any whose
/// eliminant has lower degree than generic_degree.
PreimageSample count_preimages(const PlaneMap& f, const Rational& c1, const Rational& c2);
PreimageSample count_preimages(const PlaneMap& f, const Rational& c1, const Rational& c2, int generic_degree);

struct TopologicalDegree {
  std::optional<unsigned> degree;  // set when every accepted sample agrees
  std::vector<PreimageSample> samples;
  std::vector<std::string> degenerate_log;
  std::uint64_t seed = 0;
};
/// Draws small-height rational targets until `samples` generic ones are
/// found; degenerate targets are logged and replaced.
TopologicalDegree topological_degree(const PlaneMap& f, unsigned samples, std::uint64_t seed);
TopologicalDegree topological_degree(unsigned samples, std::uint64_t seed);

}  // namespace phm
