#include <gtest/gtest.h>

#include <random>

#include "phm/degrees.hpp"

using namespace phm;

namespace {

const std::vector<std::string> XY{"x", "y"};
SparsePoly P(const char* s) { return SparsePoly::parse(s, XY); }

IntPolynomial ip(std::initializer_list<long> ascending) {
  IntPolynomial p;
  for (long c : ascending) p.coeffs.emplace_back(c);
  return p;
}

IntMatrix scaled_identity(long k) {
  IntMatrix m{};
  for (std::size_t i = 0; i < 5; ++i) m[i][i] = k;
  return m;
}

// det by Gaussian elimination over Q.
Rational det(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

Rational eval(const IntPolynomial& p, long t) {
  Rational acc = 0;
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * t + Rational(*it);
  return acc;
}

}  // namespace

TEST(CharPoly, PullbackMatrix) {
  const IntPolynomial p = char_poly(pullback_matrix());
  EXPECT_EQ(p, ip({-4, -15, -20, -10, 0, 1}));
  // (t - 4)(t + 1)^4 at a few points.
  for (long t = -3; t <= 6; ++t) EXPECT_EQ(eval(p, t), Rational((t - 4) * (t + 1) * (t + 1) * (t + 1) * (t + 1)));
}

TEST(CharPoly, Trivial) {
  EXPECT_EQ(char_poly(scaled_identity(1)), ip({-1, 5, -10, 10, -5, 1}));
  EXPECT_EQ(char_poly(scaled_identity(0)), ip({0, 0, 0, 0, 0, 1}));
}

TEST(CharPoly, AgreesWithDeterminantOracle) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> d(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix m;
    for (auto& row : m) {
      for (auto& v : row) v = d(rng);
    }
    const IntPolynomial p = char_poly(m);
    ASSERT_EQ(p.degree(), 5);
    for (long t : {-2L, 0L, 1L, 3L, 7L, 11L}) {
      std::vector<std::vector<Rational>> a(5, std::vector<Rational>(5));
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) a[i][j] = Rational((i == j ? t : 0) - m[i][j]);
      }
      ASSERT_EQ(eval(p, t), det(a));
    }
    // Cayley-Hamilton and transpose invariance.
    for (const auto& row : evaluate_at_matrix(p, to_integer_matrix(m))) {
      for (const auto& v : row) ASSERT_EQ(v, 0);
    }
    ASSERT_EQ(char_poly(transpose(m)), p);
  }
}

TEST(CharPoly, CayleyHamiltonOnPullback) {
  const IntMatrix m = pullback_matrix();
  for (const auto& row : evaluate_at_matrix(char_poly(m), to_integer_matrix(m))) {
    for (const auto& v : row) EXPECT_EQ(v, 0);
  }
}

TEST(SpectralRadius, Examples) {
  const SpectralRadius r = spectral_radius_exact(char_poly(pullback_matrix()));
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(*r.exact, 4);
  const SpectralRadius t = spectral_radius_exact(char_poly(transpose(pullback_matrix())));
  ASSERT_TRUE(t.exact);
  EXPECT_EQ(*t.exact, 4);

  const SpectralRadius one = spectral_radius_exact(ip({-1, 5, -10, 10, -5, 1}));
  ASSERT_TRUE(one.exact);
  EXPECT_EQ(*one.exact, 1);

  const SpectralRadius s = spectral_radius_exact(ip({-2, 0, 1}));
  EXPECT_FALSE(s.exact);
  EXPECT_LT(s.hi - s.lo, Rational(1, 1000000000000L));
  EXPECT_LT(s.lo * s.lo, 2);
  EXPECT_GT(s.hi * s.hi, 2);
}

TEST(Eigen, Anticanonical) {
  const IntMatrix m = pullback_matrix();
  EXPECT_TRUE(anticanonical_eigencheck(m));
  EXPECT_EQ(apply_matrix(m, anticanonical()), (DivisorClass{{8, 8, -4, -4, -4}}));
  EXPECT_FALSE(anticanonical_eigencheck(scaled_identity(1)));
  EXPECT_TRUE(anticanonical_eigencheck(scaled_identity(4)));
}

TEST(Divisibility, Examples) {
  EXPECT_FALSE(fibration_divisibility(4, 6));
  EXPECT_TRUE(fibration_divisibility(2, 6));
  for (long k = 1; k < 20; ++k) EXPECT_TRUE(fibration_divisibility(1, k));
  EXPECT_THROW(fibration_divisibility(0, 6), std::invalid_argument);
}

TEST(TopDegree, SixOnGenericSamples) {
  const TopologicalDegree td = topological_degree(5, 42);
  ASSERT_TRUE(td.degree);
  EXPECT_EQ(*td.degree, 6u);
  ASSERT_EQ(td.samples.size(), 5u);
  for (const auto& s : td.samples) {
    EXPECT_EQ(s.preimages.size(), 6u);
    EXPECT_LT(s.max_residual, 1e-8L);
  }
}

TEST(TopDegree, SeedIndependent) {
  for (std::uint64_t seed : {1ULL, 7ULL, 2024ULL}) {
    const TopologicalDegree td = topological_degree(3, seed);
    ASSERT_TRUE(td.degree) << seed;
    EXPECT_EQ(*td.degree, 6u) << seed;
  }
}

TEST(TopDegree, PreimagesMapBackToTarget) {
  const PlaneMap h = heat_map_xy();
  const PreimageSample s = count_preimages(h, Rational(4, 5), Rational(-11, 5));
  ASSERT_EQ(s.preimages.size(), 6u);
  for (const Preimage& p : s.preimages) {
    const std::array<std::complex<long double>, 2> pt{p.x, p.y};
    for (std::size_t k = 0; k < 2; ++k) {
      const auto num = h.comp(k).numerator().evaluate_as<std::complex<long double>>(pt);
      const auto den = h.comp(k).denominator().evaluate_as<std::complex<long double>>(pt);
      const std::complex<long double> target = k == 0 ? 0.8L : -2.2L;
      EXPECT_LT(std::abs(num / den - target), 1e-8L);
    }
  }
}

TEST(TopDegree, CollapseImageIsDegenerate) {
  EXPECT_THROW(count_preimages(heat_map_xy(), Rational(1), Rational(1)), DegenerateSample);
}

TEST(TopDegree, TranslationHasDegreeOne) {
  const PlaneMap t{Chart::XY, Chart::XY, RatFunc::from_polys(P("x + 1"), P("1")), RatFunc::from_polys(P("y"), P("1"))};
  const TopologicalDegree td = topological_degree(t, 3, 5);
  ASSERT_TRUE(td.degree);
  EXPECT_EQ(*td.degree, 1u);
}

TEST(TopDegree, NonSeparatingProjectionIsReportedNotMiscounted) {
  // (x^2, y^2): preimages pair up over each x-root, so the eliminant has
  // repeated roots and every sample is rejected instead of undercounted.
  const PlaneMap q{Chart::XY, Chart::XY, RatFunc::from_polys(P("x^2"), P("1")), RatFunc::from_polys(P("y^2"), P("1"))};
  const TopologicalDegree td = topological_degree(q, 3, 5);
  EXPECT_FALSE(td.degree);
  EXPECT_FALSE(td.degenerate_log.empty());
}

TEST(DegreeGrowth, MatchesMatrixPowers) {
  const auto rows = degree_growth(3, pullback_matrix());
  ASSERT_EQ(rows.size(), 3u);
  const std::array<Bidegree, 3> want{{{3, 4}, {13, 12}, {51, 52}}};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i].n, i + 1);
    EXPECT_EQ(rows[i].symbolic, want[i]);
    EXPECT_EQ(rows[i].predicted, want[i]);
  }
  const auto total = [](Bidegree b) { return static_cast<double>(b.dx + b.dy); };
  const double ratio = total(rows[2].symbolic) / total(rows[1].symbolic);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(DegreeGrowth, RejectsDepth) {
  EXPECT_THROW(degree_growth(0, pullback_matrix()), std::invalid_argument);
  EXPECT_THROW(degree_growth(5, pullback_matrix()), std::invalid_argument);
}
