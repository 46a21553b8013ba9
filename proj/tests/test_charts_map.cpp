#include <gtest/gtest.h>

#include <random>

#include "phm/charts_map.hpp"

using namespace phm;

namespace {

const std::vector<std::string> XY{"x", "y"};
SparsePoly P(const char* s) { return SparsePoly::parse(s, XY); }

std::optional<Finite> finite(const EvalResult& r) {
  if (const auto* f = std::get_if<Finite>(&r)) return *f;
  return std::nullopt;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-40, 40), den(1, 9);
  return make_rational(num(rng), den(rng));
}

}  // namespace

TEST(HeatMap, XYComponents) {
  const PlaneMap h = heat_map(Chart::XY, Chart::XY);
  EXPECT_TRUE(exact_divide(h.comp1.numerator(), P("(x*y^2+2*x*y-3)*(x^2*y^2-6*x*y-x+6)")).has_value());
  EXPECT_TRUE(exact_divide(P("(x*y^2+2*x*y-3)*(x^2*y^2-6*x*y-x+6)"), h.comp1.numerator()).has_value());
  EXPECT_EQ(bidegree(h.comp1.numerator()), (Bidegree{3, 4}));
  EXPECT_EQ(bidegree(h.comp2.numerator()), (Bidegree{4, 3}));
}

TEST(HeatMap, ReciprocalInUY) {
  const PlaneMap u = heat_map(Chart::XY, Chart::UY);
  const SparsePoly want = P("(x*y^2+4*x*y+x-y-5)*(x^2*y^2-6*x*y-y+6)");
  EXPECT_TRUE(exact_divide(u.comp1.numerator(), want).has_value());
  EXPECT_TRUE(exact_divide(want, u.comp1.numerator()).has_value());
  EXPECT_TRUE(u.comp1.same_function(heat_map_xy().comp1.reciprocal()));
}

TEST(HeatMap, ReciprocalInXV) {
  EXPECT_TRUE(heat_map(Chart::XY, Chart::XV).comp2.same_function(heat_map_xy().comp2.reciprocal()));
  EXPECT_TRUE(heat_map(Chart::XY, Chart::XV).comp1.same_function(heat_map_xy().comp1));
}

TEST(Evaluate, C1CollapsesToP1) {
  const auto v = finite(evaluate(heat_map_xy(), Rational(2), Rational(1, 2)));
  ASSERT_TRUE(v);
  EXPECT_EQ(*v, (Finite{Rational(1), Rational(1)}));
}

TEST(Evaluate, C3CollapsesToOriginOfUY) {
  ASSERT_EQ(curves::C3().evaluate(std::array<Rational, 2>{Rational(0), Rational(6)}), 0);
  const auto v = finite(evaluate(heat_map(Chart::XY, Chart::UY), Rational(0), Rational(6)));
  ASSERT_TRUE(v);
  EXPECT_EQ(*v, (Finite{Rational(0), Rational(0)}));
}

TEST(Evaluate, Origin) {
  const auto v = finite(evaluate(heat_map_xy(), Rational(0), Rational(0)));
  ASSERT_TRUE(v);
  EXPECT_EQ(*v, (Finite{Rational(3, 5), Rational(3, 5)}));
  const auto u = finite(evaluate(heat_map(Chart::XY, Chart::UY), Rational(0), Rational(0)));
  ASSERT_TRUE(u);
  EXPECT_EQ(*u, (Finite{Rational(5, 3), Rational(3, 5)}));
}

TEST(Evaluate, IndeterminateAtP1) {
  EXPECT_TRUE(std::holds_alternative<Indeterminate>(evaluate(heat_map_xy(), Rational(1), Rational(1))));
  EXPECT_TRUE(indeterminate_in_all_charts(heat_map_xy(), Rational(1), Rational(1)));
  EXPECT_FALSE(indeterminate_in_all_charts(heat_map_xy(), Rational(0), Rational(0)));
}

TEST(Evaluate, InfiniteComponent) {
  // (0,0) is not on D6 or C3; pick a point of D6 = x y^2 + 4xy + x - y - 5 off C3: y = 0, x = 5.
  const EvalResult r = evaluate(heat_map_xy(), Rational(5), Rational(0));
  const auto* inf = std::get_if<InfiniteComponent>(&r);
  ASSERT_NE(inf, nullptr);
  EXPECT_EQ(inf->components, std::vector<std::size_t>{0});
}

TEST(Compose, IdentityIsNeutral) {
  const PlaneMap h = heat_map_xy();
  const PlaneMap c = compose_reduce(h, identity_map(Chart::XY));
  EXPECT_TRUE(c.comp1.same_function(h.comp1));
  EXPECT_TRUE(c.comp2.same_function(h.comp2));
  EXPECT_EQ(c.comp1.numerator(), h.comp1.numerator());
}

TEST(Compose, SecondIterateBidegreeAndCoprime) {
  const PlaneMap h = heat_map_xy();
  CompositionLog log;
  const PlaneMap h2 = compose_reduce(h, h, &log);
  EXPECT_EQ(bidegree(h2.comp1.numerator()), (Bidegree{13, 12}));
  // The naive bound [[3,4],[4,3]]^2 e1 = (25, 24) is not reached: cancellation happens.
  EXPECT_GT(log.unreduced_num[0].dx, log.reduced_num[0].dx);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_TRUE(gcd(h2.comp(k).numerator(), h2.comp(k).denominator()).is_constant());
}

TEST(Compose, AgreesWithPointwiseIteration) {
  const PlaneMap h = heat_map_xy();
  const PlaneMap h2 = compose_reduce(h, h);
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 100) {
    const Rational x = random_rational(rng), y = random_rational(rng);
    const auto once = finite(evaluate(h, x, y));
    if (!once) continue;
    const auto twice = finite(evaluate(h, once->x, once->y));
    const auto direct = finite(evaluate(h2, x, y));
    if (!twice || !direct) continue;
    ASSERT_EQ(*twice, *direct) << x << ", " << y;
    ++checked;
  }
}

TEST(Charts, CoherentAcrossRoutes) {
  std::mt19937_64 rng(12);
  const PlaneMap h = heat_map_xy();
  int checked = 0;
  while (checked < 100) {
    const Rational x = random_rational(rng), y = random_rational(rng);
    if (x == 0 || y == 0) continue;
    const auto base = finite(evaluate(h, x, y));
    if (!base || base->x == 0 || base->y == 0) continue;
    const Rational u = 1 / x, v = 1 / y;
    const Rational u1 = 1 / base->x, v1 = 1 / base->y;
    // Source charts.
    EXPECT_EQ(finite(evaluate(heat_map(Chart::UY, Chart::XY), u, y)), base);
    EXPECT_EQ(finite(evaluate(heat_map(Chart::XV, Chart::XY), x, v)), base);
    EXPECT_EQ(finite(evaluate(heat_map(Chart::UV, Chart::XY), u, v)), base);
    // Target charts.
    EXPECT_EQ(finite(evaluate(heat_map(Chart::XY, Chart::UY), x, y)), (Finite{u1, base->y}));
    EXPECT_EQ(finite(evaluate(heat_map(Chart::XY, Chart::XV), x, y)), (Finite{base->x, v1}));
    EXPECT_EQ(finite(evaluate(heat_map(Chart::UV, Chart::UV), u, v)), (Finite{u1, v1}));
    ++checked;
  }
}

TEST(Jacobian, CriticalFactorsOfH) {
  using namespace curves;
  const std::vector<std::pair<std::string, SparsePoly>> cands{
      {"C1", C1()}, {"C2", C2()}, {"C3", C3()}, {"C4", C4()}, {"C5", C5()}};
  const CriticalFactors cf = jacobian_critical_factors(heat_map_xy(), cands, {D6(), D7(), C3(), C4()});
  ASSERT_EQ(cf.factors.size(), 5u);
  for (const auto& f : cf.factors) EXPECT_GE(f.exponent, 1u) << f.label;
  EXPECT_TRUE(cf.residual_explained) << cf.residual.str();
}

TEST(Jacobian, IdentityHasConstantJacobian) {
  const CriticalFactors cf = jacobian_critical_factors(identity_map(Chart::XY), {{"C1", curves::C1()}}, {});
  EXPECT_TRUE(cf.factors.empty());
  EXPECT_TRUE(cf.residual.is_constant());
  EXPECT_TRUE(jacobian_numerator(identity_map(Chart::XY)).is_constant());
}

TEST(Jacobian, UnexplainedResidualIsReported) {
  // J of (x^2 y, y) is 2xy; with no candidates and no allowed factors, xy is unexplained.
  const PlaneMap f{Chart::XY, Chart::XY, RatFunc::from_polys(P("x^2*y"), P("1")), RatFunc::from_polys(P("y"), P("1"))};
  const CriticalFactors cf = jacobian_critical_factors(f, {}, {});
  EXPECT_FALSE(cf.residual_explained);
}

TEST(Reflection, Symmetry) {
  EXPECT_TRUE(check_reflection_symmetry(heat_map_xy()));
  EXPECT_TRUE(check_reflection_symmetry(heat_map(Chart::UV, Chart::UV)));
  const PlaneMap sq{Chart::XY, Chart::XY, RatFunc::from_polys(P("x^2"), P("1")), RatFunc::from_polys(P("y"), P("1"))};
  EXPECT_FALSE(check_reflection_symmetry(sq));
}

TEST(RatFunc, ReducedAndRejectsZeroDenominator) {
  const RatFunc f = RatFunc::from_polys(P("x^2*y - y"), P("x*y - y"));
  EXPECT_TRUE(f.same_function(RatFunc::from_polys(P("x + 1"), P("1"))));
  EXPECT_TRUE(f.denominator().is_constant());
  EXPECT_THROW(RatFunc::from_polys(P("x"), SparsePoly(XY)), std::domain_error);
}
