#include <gtest/gtest.h>
#include <zlib.h>

#include <cmath>
#include <random>

#include "phm/basin_render.hpp"
#include "phm/charts_map.hpp"

using namespace phm;

namespace {

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) | b[at + 3];
}

struct Chunk {
  std::string type;
  std::vector<std::uint8_t> data;
};

std::vector<Chunk> png_chunks(const std::vector<std::uint8_t>& b) {
  std::vector<Chunk> out;
  std::size_t at = 8;
  while (at + 12 <= b.size()) {
    const std::uint32_t len = be32(b, at);
    Chunk c{std::string(b.begin() + at + 4, b.begin() + at + 8),
            std::vector<std::uint8_t>(b.begin() + at + 8, b.begin() + at + 8 + len)};
    const uLong crc = crc32(0, b.data() + at + 4, 4 + len);
    EXPECT_EQ(crc, be32(b, at + 8 + len)) << c.type;
    out.push_back(std::move(c));
    at += 12 + len;
  }
  EXPECT_EQ(at, b.size());
  return out;
}

}  // namespace

TEST(FixedPoint, DataChecks) {
  const FixedPointData f = fixed_point_data();
  EXPECT_TRUE(f.divides);
  EXPECT_TRUE(f.attracting);
  EXPECT_DOUBLE_EQ(f.x, (std::sqrt(5.0) - 1) / 2);
  EXPECT_NEAR(f.spectral_radius, (5 * std::sqrt(5.0) - 11) / 4, 1e-12);
}

TEST(FixedPoint, JacobianMatchesFiniteDifferences) {
  const FixedPointData f = fixed_point_data();
  const long double h = 1e-7L, p = (std::sqrt(5.0L) - 1) / 2;
  for (int k = 0; k < 2; ++k) {
    long double xp = p + (k == 0 ? h : 0), yp = p + (k == 1 ? h : 0);
    long double xm = p - (k == 0 ? h : 0), ym = p - (k == 1 ? h : 0);
    ASSERT_TRUE(heat_map_step(xp, yp, 1e-30L));
    ASSERT_TRUE(heat_map_step(xm, ym, 1e-30L));
    EXPECT_NEAR(static_cast<double>((xp - xm) / (2 * h)), f.jacobian[0][k], 1e-8);
    EXPECT_NEAR(static_cast<double>((yp - ym) / (2 * h)), f.jacobian[1][k], 1e-8);
  }
}

TEST(Classify, Examples) {
  const RenderConfig cfg;
  const Classification fp = classify(kPhiInverse, kPhiInverse, cfg);
  EXPECT_EQ(fp.cls, PixelClass::Basin);
  EXPECT_EQ(fp.iterations, 0u);
  EXPECT_EQ(classify(0, 0, cfg).cls, PixelClass::Basin);
}

TEST(Classify, OriginOracle) {
  // H(0,0) = (3/5, 3/5); a long-double 200-step orbit lands on the fixed point.
  long double x = 0, y = 0;
  ASSERT_TRUE(heat_map_step(x, y, 1e-30L));
  EXPECT_EQ(x, 0.6L);
  for (int i = 0; i < 200; ++i) ASSERT_TRUE(heat_map_step(x, y, 1e-30L));
  EXPECT_NEAR(static_cast<double>(x), kPhiInverse, 1e-15);
  EXPECT_NEAR(static_cast<double>(y), kPhiInverse, 1e-15);
}

TEST(Classify, RepellingFixedPointIsNonBasin) {
  const EvalResult r = evaluate(heat_map_xy(), Rational(-3), Rational(-3));
  const auto* v = std::get_if<Finite>(&r);
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(*v, (Finite{Rational(-3), Rational(-3)}));
  RenderConfig cfg;
  EXPECT_EQ(classify(-3, -3, cfg).cls, PixelClass::NonBasin);
  cfg.max_iter *= 4;
  EXPECT_EQ(classify(-3, -3, cfg).cls, PixelClass::NonBasin);
  long double x = -3, y = -3;
  for (unsigned i = 0; i < cfg.max_iter; ++i) ASSERT_TRUE(heat_map_step(x, y, 1e-30L));
  EXPECT_EQ(x, -3.0L);
  EXPECT_EQ(y, -3.0L);
}

TEST(Classify, CornerStableUnderDoubling) {
  RenderConfig cfg;
  const auto [x, y] = pixel_center(cfg, 0, cfg.height - 1);
  EXPECT_LT(x, -8.9);
  EXPECT_LT(y, -8.9);
  const PixelClass a = classify(x, y, cfg).cls;
  cfg.max_iter *= 2;
  EXPECT_EQ(classify(x, y, cfg).cls, a);
}

TEST(Classify, LabelStability) {
  RenderConfig cfg, twice;
  twice.max_iter = 2 * cfg.max_iter;
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<unsigned> px(0, cfg.width - 1);
  int agree = 0;
  for (int s = 0; s < 1000; ++s) {
    const auto [x, y] = pixel_center(cfg, px(rng), px(rng));
    agree += classify(x, y, cfg).cls == classify(x, y, twice).cls;
  }
  EXPECT_GE(agree, 990);
}

TEST(Step, FloatAgreesWithExactFirstIterate) {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<long> num(-90, 90), den(1, 10);
  const PlaneMap h = heat_map_xy();
  int done = 0;
  while (done < 100) {
    const Rational x = make_rational(num(rng), den(rng)), y = make_rational(num(rng), den(rng));
    const EvalResult r = evaluate(h, x, y);
    const auto* exact = std::get_if<Finite>(&r);
    if (exact == nullptr) continue;
    double fx = x.get_d(), fy = y.get_d();
    if (!heat_map_step(fx, fy, 1e-12)) continue;
    const double ex = exact->x.get_d(), ey = exact->y.get_d();
    ASSERT_LE(std::fabs(fx - ex), 1e-12 * std::max(1.0, std::fabs(ex))) << x << ", " << y;
    ASSERT_LE(std::fabs(fy - ey), 1e-12 * std::max(1.0, std::fabs(ey))) << x << ", " << y;
    ++done;
  }
}

TEST(Step, GuardTripsAtIndeterminacy) {
  double x = 1, y = 1;
  EXPECT_FALSE(heat_map_step(x, y, 1e-12));
}

TEST(Render, DeterministicAcrossThreadCounts) {
  RenderConfig cfg;
  cfg.threads = 1;
  const Image one = render(cfg);
  ASSERT_EQ(one.labels.size(), 512u * 512u);
  const auto ref = encode_ppm(one);
  for (unsigned t : {4u, 8u}) {
    cfg.threads = t;
    EXPECT_EQ(encode_ppm(render(cfg)), ref) << t;
  }
  // The fixed point sits at the top-right corner of the default window.
  EXPECT_EQ(one.at(cfg.width - 1, 0), PixelClass::Basin);
}

TEST(Render, PixelCentersSpanTheRegion) {
  RenderConfig cfg;
  cfg.width = 4;
  cfg.height = 2;
  cfg.xmin = 0;
  cfg.xmax = 4;
  cfg.ymin = 0;
  cfg.ymax = 2;
  EXPECT_EQ(pixel_center(cfg, 0, 0), (std::pair<double, double>{0.5, 1.5}));
  EXPECT_EQ(pixel_center(cfg, 3, 1), (std::pair<double, double>{3.5, 0.5}));
}

TEST(Encode, PpmHeaderAndBody) {
  Image img{3, 2, {PixelClass::Basin, PixelClass::NonBasin, PixelClass::Guarded, PixelClass::Basin,
                   PixelClass::Basin, PixelClass::NonBasin}};
  const auto b = encode_ppm(img);
  const std::string header = "P6\n3 2\n255\n";
  ASSERT_EQ(b.size(), header.size() + 18);
  EXPECT_EQ(std::string(b.begin(), b.begin() + header.size()), header);
  EXPECT_EQ(std::vector<std::uint8_t>(b.begin() + header.size(), b.end()), img.rgb());
}

TEST(Encode, PngStructureAndPixels) {
  Image img{3, 2, {PixelClass::Basin, PixelClass::NonBasin, PixelClass::Guarded, PixelClass::Basin,
                   PixelClass::Basin, PixelClass::NonBasin}};
  const auto b = encode_png(img);
  const std::vector<std::uint8_t> sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  ASSERT_GE(b.size(), 8u);
  EXPECT_EQ(std::vector<std::uint8_t>(b.begin(), b.begin() + 8), sig);
  const auto chunks = png_chunks(b);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[0].type, "IHDR");
  EXPECT_EQ(be32(chunks[0].data, 0), 3u);
  EXPECT_EQ(be32(chunks[0].data, 4), 2u);
  EXPECT_EQ(chunks[0].data[8], 8);
  EXPECT_EQ(chunks[0].data[9], 2);
  EXPECT_EQ(chunks[1].type, "IDAT");
  EXPECT_EQ(chunks[2].type, "IEND");

  std::vector<std::uint8_t> raw(2 * (1 + 9));
  uLongf len = raw.size();
  ASSERT_EQ(uncompress(raw.data(), &len, chunks[1].data.data(), chunks[1].data.size()), Z_OK);
  ASSERT_EQ(len, raw.size());
  const auto px = img.rgb();
  for (unsigned j = 0; j < 2; ++j) {
    EXPECT_EQ(raw[j * 10], 0);
    EXPECT_TRUE(std::equal(px.begin() + j * 9, px.begin() + (j + 1) * 9, raw.begin() + j * 10 + 1));
  }
}
