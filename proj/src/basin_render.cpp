#include "phm/basin_render.hpp"

#include <zlib.h>

#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "phm/charts_map.hpp"

namespace phm {

namespace {

template <class T>
bool step(T& x, T& y, T guard) {
  const T xy = x * y;
  const T c3 = xy * xy - 6 * xy - y + 6;
  const T c4 = xy * xy - 6 * xy - x + 6;
  const T c6 = xy * y + 2 * xy - 3;
  const T c7 = xy * x + 2 * xy - 3;
  const T d6 = xy * y + 4 * xy + x - y - 5;
  const T d7 = xy * x + 4 * xy - x + y - 5;
  const T den1 = d6 * c3;
  const T den2 = d7 * c4;
  if (!(std::fabs(den1) >= guard) || !(std::fabs(den2) >= guard)) return false;
  const T nx = c6 * c4 / den1;
  const T ny = c7 * c3 / den2;
  if (!std::isfinite(nx) || !std::isfinite(ny)) return false;
  x = nx;
  y = ny;
  return true;
}

template <class T>
Classification run(T x, T y, const RenderConfig& cfg) {
  const T fp = static_cast<T>(kPhiInverse);
  const T tol = static_cast<T>(cfg.tol);
  const T guard = static_cast<T>(cfg.guard);
  unsigned inside = 0;
  for (unsigned n = 0; n <= cfg.max_iter; ++n) {
    if (std::fabs(x - fp) < tol && std::fabs(y - fp) < tol) {
      if (++inside > cfg.confirm) return {PixelClass::Basin, n - cfg.confirm, false};
    } else {
      inside = 0;
    }
    if (n == cfg.max_iter) break;
    if (!step(x, y, guard)) return {PixelClass::Guarded, n, false};
  }
  return {PixelClass::NonBasin, cfg.max_iter, false};
}

}  // namespace

bool heat_map_step(long double& x, long double& y, long double guard) { return step(x, y, guard); }
bool heat_map_step(double& x, double& y, double guard) { return step(x, y, guard); }

Classification classify(double x, double y, const RenderConfig& cfg) {
  Classification c = run<double>(x, y, cfg);
  if (c.cls != PixelClass::Guarded) return c;
  // Extended precision with a proportionally finer guard.
  RenderConfig fine = cfg;
  fine.guard = cfg.guard * 1e-4;
  c = run<long double>(x, y, fine);
  c.retried = true;
  return c;
}

std::pair<double, double> pixel_center(const RenderConfig& cfg, unsigned i, unsigned j) {
  const double dx = (cfg.xmax - cfg.xmin) / cfg.width;
  const double dy = (cfg.ymax - cfg.ymin) / cfg.height;
  return {cfg.xmin + (i + 0.5) * dx, cfg.ymax - (j + 0.5) * dy};
}

Image render(const RenderConfig& cfg) {
  if (cfg.width == 0 || cfg.height == 0 || !(cfg.xmax > cfg.xmin) || !(cfg.ymax > cfg.ymin)) {
    throw std::invalid_argument("render: empty region or resolution");
  }
  Image img;
  img.width = cfg.width;
  img.height = cfg.height;
  img.labels.assign(static_cast<std::size_t>(cfg.width) * cfg.height, PixelClass::NonBasin);
  std::atomic<unsigned> next_row{0};
  auto worker = [&] {
    for (unsigned j = next_row++; j < cfg.height; j = next_row++) {
      for (unsigned i = 0; i < cfg.width; ++i) {
        const auto [x, y] = pixel_center(cfg, i, j);
        img.labels[static_cast<std::size_t>(j) * cfg.width + i] = classify(x, y, cfg).cls;
      }
    }
  };
  const unsigned n = std::max(1u, cfg.threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return img;
}

std::vector<std::uint8_t> Image::rgb() const {
  std::vector<std::uint8_t> out;
  out.reserve(labels.size() * 3);
  for (PixelClass c : labels) {
    switch (c) {
      case PixelClass::Basin: out.insert(out.end(), {255, 221, 0}); break;
      case PixelClass::NonBasin: out.insert(out.end(), {204, 0, 0}); break;
      case PixelClass::Guarded: out.insert(out.end(), {128, 128, 128}); break;
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
  const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto px = img.rgb();
  out.insert(out.end(), px.begin(), px.end());
  return out;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_chunk(std::vector<std::uint8_t>& out, const char* type, const std::vector<std::uint8_t>& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
  std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, img.width);
  put_u32(ihdr, img.height);
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});  // 8-bit RGB, no interlace
  put_chunk(out, "IHDR", ihdr);

  const auto px = img.rgb();
  std::vector<std::uint8_t> raw;
  raw.reserve(px.size() + img.height);
  for (unsigned j = 0; j < img.height; ++j) {
    raw.push_back(0);
    const auto row = px.begin() + static_cast<std::ptrdiff_t>(j) * img.width * 3;
    raw.insert(raw.end(), row, row + img.width * 3);
  }
  uLongf len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> z(len);
  if (compress2(z.data(), &len, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK) {
    throw std::runtime_error("encode_png: compression failed");
  }
  z.resize(len);
  put_chunk(out, "IDAT", z);
  put_chunk(out, "IEND", {});
  return out;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

FixedPointData fixed_point_data() {
  FixedPointData d;
  const PlaneMap h = heat_map_xy();

  // x'(x, x) - x, numerator only.
  const RatFunc& f = h.comp1;
  const SparsePoly x = SparsePoly::variable({"x", "y"}, 0);
  const SparsePoly diag = f.numerator().substitute(1, x) - x * f.denominator().substitute(1, x);
  d.divides = exact_divide(diag, SparsePoly::parse("x^2 + x - 1", {"x", "y"})).has_value();

  const long double p = (std::sqrt(5.0L) - 1) / 2;
  const std::array<long double, 2> pt{p, p};
  const std::span<const long double> s(pt);
  for (std::size_t i = 0; i < 2; ++i) {
    const RatFunc& c = h.comp(i);
    const long double n = c.numerator().evaluate_as<long double>(s);
    const long double den = c.denominator().evaluate_as<long double>(s);
    for (std::size_t j = 0; j < 2; ++j) {
      const long double dn = c.numerator().derivative(j).evaluate_as<long double>(s);
      const long double dd = c.denominator().derivative(j).evaluate_as<long double>(s);
      d.jacobian[i][j] = static_cast<double>((dn * den - n * dd) / (den * den));
    }
  }
  const std::complex<double> tr = d.jacobian[0][0] + d.jacobian[1][1];
  const std::complex<double> det = d.jacobian[0][0] * d.jacobian[1][1] - d.jacobian[0][1] * d.jacobian[1][0];
  const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
  d.spectral_radius = std::max(std::abs((tr + disc) / 2.0), std::abs((tr - disc) / 2.0));
  d.attracting = d.spectral_radius < 1;
  if (!d.divides) throw std::runtime_error("fixed point check: x^2 + x - 1 does not divide x'(x,x) - x");
  if (!d.attracting) throw std::runtime_error("fixed point check: Jacobian spectral radius is not below 1");
  return d;
}

}  // namespace phm
