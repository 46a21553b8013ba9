#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phm/blowup_surface.hpp"

namespace phm {

/// Class in the basis (pi*L_x, pi*L_y, E1, E2, E3).
struct DivisorClass {
  std::array<long, 5> c{};

  long operator[](std::size_t i) const { return c[i]; }
  long& operator[](std::size_t i) { return c[i]; }
  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;
  friend DivisorClass operator+(DivisorClass a, const DivisorClass& b) {
    for (std::size_t i = 0; i < 5; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend DivisorClass operator-(DivisorClass a, const DivisorClass& b) {
    for (std::size_t i = 0; i < 5; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend DivisorClass operator*(long k, DivisorClass a) {
    for (auto& v : a.c) v *= k;
    return a;
  }
  std::string str() const;
};

enum class Basis { Lx, Ly, E1, E2, E3 };
inline constexpr std::array<Basis, 5> kBasis{Basis::Lx, Basis::Ly, Basis::E1, Basis::E2, Basis::E3};
std::string basis_name(Basis b);
DivisorClass basis_vector(Basis b);
/// 2 pi*L_x + 2 pi*L_y - E1 - E2 - E3.
DivisorClass anticanonical();

/// pi*L_x . pi*L_y = 1, E_i . E_j = -delta_ij, all else 0.
long intersect(const DivisorClass& a, const DivisorClass& b);

/// (deg_x p, deg_y p, 0, 0, 0). Throws std::domain_error for p == 0.
DivisorClass class_in_base(const SparsePoly& p);

/// p rewritten in another base chart by clearing the inverted variables.
SparsePoly rechart(const SparsePoly& p, Chart from, Chart to);

/// Centers of the blow-up: p1 = (1,1) in XY, p2 = (0,0) in UY, p3 = (0,0) in XV.
struct BlowupCenter {
  Exceptional e;
  Chart chart;
  std::array<Rational, 2> point;
};
std::array<BlowupCenter, 3> blowup_centers();

/// Multiplicity of an irreducible curve (given in a base chart) at each center.
std::array<unsigned, 3> center_multiplicities(const CurveOnSurface& curve);

/// Base class minus the multiplicities at p1, p2, p3. The curve must be
/// irreducible and given in a base chart.
DivisorClass proper_transform_class(const CurveOnSurface& curve);
DivisorClass proper_transform_class(const SparsePoly& curve_xy);

class UnexplainedComponent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PullbackTerm {
  std::string label;
  unsigned coefficient = 0;
  DivisorClass cls;
};
struct PullbackExclusion {
  std::string label;
  std::string reason;
};
struct PullbackComputation {
  DivisorClass cls;
  std::vector<PullbackTerm> terms;
  std::vector<PullbackExclusion> excluded;
  std::string str() const;
};

/// 𝓗*[D] for D one of E1, E2, E3, the proper transforms of {x = 0} and
/// {y = 0}. Source curves are read off as factors of the pulled-back
/// coordinate that cuts out D, in every source chart.
enum class TargetDivisor { E1, E2, E3, LxTilde, LyTilde };
std::string target_divisor_name(TargetDivisor d);
PullbackComputation pullback_target_divisor(TargetDivisor d);

/// 𝓗* of a basis element. For pi*L_x and pi*L_y the total transform of
/// {x = 0} (resp. {y = 0}) is expanded as its proper transform plus
/// exceptional divisors.
PullbackComputation pullback_basis_class(Basis b);

using IntMatrix = std::array<std::array<long, 5>, 5>;
/// Column j is 𝓗* of basis element j; acts on column vectors.
IntMatrix pullback_matrix();
IntMatrix reference_pullback_matrix();
DivisorClass apply_matrix(const IntMatrix& m, const DivisorClass& v);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntMatrix transpose(const IntMatrix& m);
std::string to_string(const IntMatrix& m);

struct NonFunctoriality {
  DivisorClass pulled_back_base;  // pi*(H*[L_y])
  DivisorClass lifted;            // 𝓗*(pi*[L_y])
  std::array<long, 2> base;       // H*[L_y] on P1 x P1
  bool differ() const { return !(pulled_back_base == lifted); }
};
NonFunctoriality non_functoriality_witness();

struct MultiplicityRow {
  std::string label;
  std::array<unsigned, 3> mult;
};
/// C2, C3, C4, C6, C7 at p1, p2, p3.
std::vector<MultiplicityRow> multiplicity_table();

/// Proper transforms of C1, C2, C3, C4, C6, C7.
std::vector<std::pair<std::string, DivisorClass>> class_equations();

}  // namespace phm
