#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "phm/charts_map.hpp"
#include "phm/upoly.hpp"

namespace phm {

enum class Exceptional { E1, E2, E3 };
std::string exceptional_name(Exceptional e);
/// The chart (a,m1), (u,m2) or (v,m3) in which E is {first coordinate = 0}.
Chart exceptional_chart(Exceptional e);
/// Complementary chart covering the point the main chart misses.
Chart exceptional_side_chart(Exceptional e);

struct CurveOnSurface {
  std::string label;
  Chart chart = Chart::XY;
  SparsePoly poly;
};
CurveOnSurface exceptional_curve(Exceptional e);

/// 𝓗 written from chart `source` into chart `target` (any of the ten charts).
PlaneMap lift_map(Chart source, Chart target);

/// A component of a map restricted to a curve: either identically infinite
/// or a rational function of the curve parameter.
struct Restriction {
  std::optional<RatFunc> value;  // nullopt means identically infinite
  bool is_constant() const;
  /// Pre: is_constant(); nullopt for infinity.
  std::optional<Rational> constant_value() const;
  std::string str() const;
};

/// y = -B(x)/A(x) (var == 1) or x = -B(y)/A(y) (var == 0).
struct LinearParametrization {
  std::size_t var = 1;
  SparsePoly num;
  SparsePoly den;
};
std::optional<LinearParametrization> linear_parametrization(const SparsePoly& curve);
Restriction restrict_component(const RatFunc& comp, const LinearParametrization& param);

struct CurvePoint {
  Rational s;
  Rational t;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};
/// Rational points of small height on {curve = 0}, found by fixing one
/// coordinate and taking rational roots in the other.
std::vector<CurvePoint> rational_points(const SparsePoly& curve, std::size_t max_points, int height = 6);

struct Collapsed {
  P1Point image;  // in the coordinates of the map's target chart
  std::string method;
};
struct NotCollapsed {
  std::optional<std::size_t> varying_component;
  std::optional<Restriction> restriction;
  std::optional<std::pair<CurvePoint, CurvePoint>> witness;
  std::optional<std::pair<P1Point, P1Point>> witness_images;
};
using CollapseVerdict = std::variant<Collapsed, NotCollapsed>;

class WitnessSearchFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pre: map.source == curve.chart and the curve is not inside I(map).
CollapseVerdict collapse_test(const CurveOnSurface& curve, const PlaneMap& map);

/// Restriction of 𝓗 to E, written into XY: (x'(t), y'(t)) with t the fiber
/// coordinate. Throws std::domain_error when both components are constant.
std::pair<RatFunc, RatFunc> exceptional_image(Exceptional e);

struct OntoVerdict {
  bool onto = false;
  unsigned multiplicity = 0;
  std::string reason;
};
/// Curve given in XY; E-coordinate read off from 𝓗 : XY -> chart of E.
OntoVerdict maps_onto_divisor(const CurveOnSurface& curve, Exceptional e);

// Indeterminacy.
struct AlgebraicPoint {
  UPoly minimal_x;  // squarefree factor of the eliminant with root x
  RootInterval x_interval;  // when real
  bool real = false;
  std::complex<long double> x;
  std::complex<long double> y;
  long double residual = 0;
};
struct IndeterminacyPoints {
  std::vector<CurvePoint> exact;
  std::vector<AlgebraicPoint> algebraic;
};
class UnresolvedCluster : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
/// Common zeros of numerator and denominator of each component, in the
/// source chart's affine coordinates. Rational points are verified 0/0.
IndeterminacyPoints indeterminacy_points(const PlaneMap& map);

struct LabeledPoint {
  std::string chart;
  std::string coords;
};
/// I(H) over the four base source charts, each point reported once.
std::vector<LabeledPoint> heat_map_indeterminacy();

// Stability.
struct StabilityItem {
  std::string item;
  bool pass = false;
  std::string detail;
};
struct StabilityReport {
  bool stable = false;
  std::vector<StabilityItem> items;
  std::optional<std::string> failing_item;
};
/// 𝓗 on the blown-up surface.
StabilityReport stability_blown_up();
/// H on P1 x P1 without blowing up.
StabilityReport stability_base();
StabilityReport stability_identity();

}  // namespace phm
