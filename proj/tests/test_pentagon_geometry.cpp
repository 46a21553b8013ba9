#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "phm/pentagon_geometry.hpp"

using namespace phm;

namespace {

using PR = ProjPoint<Rational>;

PR pt(long x, long y, long z = 1) { return {{Rational(x), Rational(y), Rational(z)}}; }

bool same_polygon(const Polygon<Rational>& a, const Polygon<Rational>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_point(a[i], b[i])) return false;
  }
  return true;
}

bool equal_exact(const ProjPoint<QSqrt5>& a, const ProjPoint<QSqrt5>& b) {
  return a.v[0] == b.v[0] && a.v[1] == b.v[1] && a.v[2] == b.v[2];
}

// Homography sending src[0..3] to dst[0..3] with h33 = 1: least squares on
// all three rows of dst x (H src) = 0, since targets may lie at infinity.
Eigen::Matrix3d dlt(const std::array<Eigen::Vector2d, 4>& src, const std::array<Eigen::Vector3d, 4>& dst) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(12, 9);
  int row = 0;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d s(src[i].x(), src[i].y(), 1);
    const Eigen::Vector3d& d = dst[i];
    for (auto [j, k] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      // d_k (H s)_j - d_j (H s)_k = 0.
      for (int c = 0; c < 3; ++c) {
        a(row, 3 * j + c) += d[k] * s[c];
        a(row, 3 * k + c) -= d[j] * s[c];
      }
      ++row;
    }
  }
  const Eigen::VectorXd h = a.leftCols(8).colPivHouseholderQr().solve(-a.col(8));
  Eigen::Matrix3d m;
  m << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1;
  return m;
}

}  // namespace

TEST(JoinMeet, Examples) {
  const ProjLine<Rational> l = join(pt(0, 0), pt(1, 0));
  EXPECT_TRUE(incident(pt(5, 0), l));
  EXPECT_FALSE(incident(pt(5, 1), l));
  const ProjPoint<Rational> inf = meet(l, join(pt(0, 1), pt(1, 1)));
  EXPECT_TRUE(same_point(inf, pt(1, 0, 0)));
  EXPECT_THROW(join(pt(1, 2), pt(2, 4, 2)), CoincidentInputs);
  EXPECT_THROW(meet(l, join(pt(3, 0), pt(-1, 0))), CoincidentInputs);
}

TEST(JoinMeet, RoundTripAndIncidence) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<long> d(-20, 20);
  int done = 0;
  while (done < 300) {
    const PR p = pt(d(rng), d(rng), d(rng) | 1), q = pt(d(rng), d(rng), 1), r = pt(d(rng), d(rng), 1);
    if (same_point(p, q) || same_point(p, r) || incident(r, join(p, q))) continue;
    const auto pq = join(p, q), pr = join(p, r);
    ASSERT_TRUE(incident(p, pq) && incident(q, pq));
    ASSERT_TRUE(same_point(meet(pq, pr), p));
    ++done;
  }
}

TEST(Midpoint, UnitSquare) {
  const PR s = projective_midpoint(pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1));
  EXPECT_TRUE(same_point(s, pt(2, 1, 2)));
  EXPECT_EQ(canonical(s).v, (Triple<Rational>{Rational(1), Rational(1, 2), Rational(1)}));
}

TEST(Midpoint, SquareWindowInsideAPentagon) {
  const Polygon<Rational> p{pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1), pt(-1, 1, 2)};
  const Polygon<Rational> h = heat_step(p);
  ASSERT_EQ(h.size(), 5u);
  EXPECT_TRUE(same_point(h[1], pt(2, 1, 2)));
}

TEST(Midpoint, CollinearTripleIsDegenerate) {
  EXPECT_THROW(projective_midpoint(pt(0, 0), pt(1, 0), pt(2, 0), pt(0, 1)), DegenerateConfiguration);
  const Polygon<Rational> p{pt(0, 0), pt(1, 0), pt(2, 0), pt(0, 1), pt(-1, 1)};
  try {
    heat_step(p);
    FAIL() << "expected DegenerateConfiguration";
  } catch (const DegenerateConfiguration& e) {
    EXPECT_TRUE(e.index().has_value());
  }
}

TEST(Midpoint, LiesOnEdgeAndIsEquivariant) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    const Polygon<Rational> p = random_convex_pentagon(rng);
    const ProjTransform<Rational> t = random_transform(rng);
    const PR s = projective_midpoint(p[0], p[1], p[2], p[3]);
    ASSERT_TRUE(incident(s, join(p[1], p[2])));
    ASSERT_TRUE(same_point(projective_midpoint(t(p[0]), t(p[1]), t(p[2]), t(p[3])), t(s)));
  }
}

TEST(HeatStep, ProjectiveEquivarianceOfClasses) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    const Polygon<Rational> p = random_convex_pentagon(rng);
    const ProjTransform<Rational> t = random_transform(rng);
    const PR a = normalize(heat_step(p));
    const PR b = normalize(heat_step(t(p)));
    ASSERT_EQ(a.v, b.v) << i;
    ASSERT_EQ(normalize(t(p)).v, normalize(p).v) << i;
  }
}

TEST(HeatStep, CommutesWithDihedralRelabeling) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 30; ++i) {
    const Polygon<Rational> p = random_convex_pentagon(rng);
    const Polygon<Rational> h = heat_step(p);
    for (std::size_t s = 0; s < 5; ++s) {
      ASSERT_TRUE(same_polygon(heat_step(relabel(p, s, false)), relabel(h, s, false)));
      // Edge (i, i+1) of the reflection is edge (s-i-1, s-i) of p.
      ASSERT_TRUE(same_polygon(heat_step(relabel(p, s, true)), relabel(h, (s + 4) % 5, true)));
    }
  }
}

TEST(Normalize, AlreadyNormalizedIsUnchanged) {
  const Polygon<Rational> p{pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1), pt(3, -2, 5)};
  EXPECT_EQ(normalize(p).v, canonical(pt(3, -2, 5)).v);
  EXPECT_TRUE(same_polygon(normalized_polygon(p), p));
}

TEST(Normalize, RejectsDegenerateFrames) {
  EXPECT_THROW(normalize(Polygon<Rational>{pt(0, 0), pt(1, 0), pt(2, 0), pt(0, 1), pt(5, 7)}), DegenerateConfiguration);
  EXPECT_THROW(normalize(Polygon<Rational>{pt(0, 0), pt(1, 0), pt(0, 1), pt(2, 0), pt(5, 7)}), DegenerateConfiguration);
}

TEST(Regular, ClassIsGoldenPoint) {
  // r* = (phi^2 : phi : 1).
  const QSqrt5 phi = QSqrt5::phi();
  const ProjPoint<QSqrt5> want{{phi * phi, phi, QSqrt5(1)}};
  EXPECT_TRUE(equal_exact(regular_class(), want));

  // Oracle: floating homography by direct linear solve.
  const Polygon<double> d = to_double(regular_pentagon());
  std::array<Eigen::Vector2d, 4> src;
  for (int i = 0; i < 4; ++i) src[i] = {d[i].v[0] / d[i].v[2], d[i].v[1] / d[i].v[2]};
  const std::array<Eigen::Vector3d, 4> dst{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1),
                                           Eigen::Vector3d(1, 1, 1)};
  const Eigen::Vector3d img = dlt(src, dst) * Eigen::Vector3d(d[4].v[0], d[4].v[1], d[4].v[2]);
  const double g = (1 + std::sqrt(5.0)) / 2;
  EXPECT_NEAR(img[0] / img[2], g * g, 1e-12);
  EXPECT_NEAR(img[1] / img[2], g, 1e-12);
}

TEST(Regular, FixedExactlyByHeatStep) {
  const Polygon<QSqrt5> p = regular_pentagon();
  EXPECT_TRUE(equal_exact(normalize(heat_step(p)), regular_class()));
  EXPECT_TRUE(equal_exact(normalize(heat_step(heat_step(p))), regular_class()));
  for (std::size_t s = 0; s < 5; ++s) {
    EXPECT_TRUE(equal_exact(normalize(relabel(p, s, false)), regular_class()));
    EXPECT_TRUE(equal_exact(normalize(relabel(p, s, true)), regular_class()));
  }
  EXPECT_EQ(converge_to_regular(p, 1e-12, 0), 0u);
}

TEST(Convergence, RandomConvexPentagons) {
  std::mt19937_64 rng(25);
  unsigned worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Polygon<Rational> p = random_convex_pentagon(rng);
    ASSERT_TRUE(is_convex(p));
    const unsigned n = converge_to_regular(to_double(p), 1e-6, 100);
    worst = std::max(worst, n);
  }
  EXPECT_LE(worst, 100u);
}

TEST(Convergence, ExactIteratesAgreeWithFloat) {
  std::mt19937_64 rng(26);
  const Polygon<Rational> p = random_convex_pentagon(rng, 9);
  Polygon<Rational> e = normalized_polygon(p);
  Polygon<double> f = to_double(e);
  for (int n = 0; n < 3; ++n) {
    e = normalized_polygon(heat_step(e));
    f = normalized_polygon(heat_step(f));
    const PR c = canonical(e[4]);
    EXPECT_NEAR(c.v[0].get_d(), f[4].v[0] / f[4].v[2], 1e-9);
    EXPECT_NEAR(c.v[1].get_d(), f[4].v[1] / f[4].v[2], 1e-9);
  }
}

TEST(Convergence, ReportsNoConvergence) {
  std::mt19937_64 rng(27);
  const Polygon<Rational> p = random_convex_pentagon(rng);
  EXPECT_THROW(converge_to_regular(to_double(p), 1e-300, 3), NoConvergence);
}

TEST(Convexity, Examples) {
  EXPECT_TRUE(is_convex(Polygon<Rational>{pt(0, 0), pt(2, 0), pt(3, 2), pt(1, 3), pt(-1, 2)}));
  EXPECT_FALSE(is_convex(Polygon<Rational>{pt(0, 0), pt(2, 0), pt(1, 1), pt(2, 3), pt(0, 3)}));
  EXPECT_FALSE(is_convex(Polygon<Rational>{pt(0, 0), pt(2, 0), pt(1, 3), pt(3, 2), pt(-1, 2)}));
}
