#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace phm {

inline constexpr double kPhiInverse = 0.61803398874989484820;

struct RenderConfig {
  double xmin = -9.0;
  double xmax = kPhiInverse;
  double ymin = -9.0;
  double ymax = kPhiInverse;
  unsigned width = 512;
  unsigned height = 512;
  unsigned max_iter = 200;
  double tol = 1e-6;
  unsigned confirm = 3;
  double guard = 1e-12;  // denominator magnitude that triggers extended precision
  unsigned threads = 1;
};

enum class PixelClass : std::uint8_t { Basin, NonBasin, Guarded };

struct Classification {
  PixelClass cls = PixelClass::NonBasin;
  unsigned iterations = 0;
  bool retried = false;  // guarded in double, re-run in long double
};

/// Iterates H from (x, y). Guarded when a denominator falls below the guard
/// or the orbit stops being finite; such points are re-run in long double.
Classification classify(double x, double y, const RenderConfig& cfg);

/// One application of H in floating point; false when a denominator is
/// below `guard` in magnitude.
bool heat_map_step(long double& x, long double& y, long double guard);
bool heat_map_step(double& x, double& y, double guard);

struct Image {
  unsigned width = 0;
  unsigned height = 0;
  std::vector<PixelClass> labels;  // row-major, row 0 at ymax
  std::vector<std::uint8_t> rgb() const;
  PixelClass at(unsigned i, unsigned j) const { return labels[static_cast<std::size_t>(j) * width + i]; }
};

/// Center of pixel (i, j).
std::pair<double, double> pixel_center(const RenderConfig& cfg, unsigned i, unsigned j);

/// Rows are handed out to `cfg.threads` workers; each pixel is a pure
/// function of its center, so the output does not depend on the thread count.
Image render(const RenderConfig& cfg);

/// Binary PPM (P6).
std::vector<std::uint8_t> encode_ppm(const Image& img);
/// PNG, 8-bit RGB, zlib-compressed scanlines.
std::vector<std::uint8_t> encode_png(const Image& img);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

struct FixedPointData {
  double x = kPhiInverse;
  double y = kPhiInverse;
  bool divides = false;  // (x^2 + x - 1) | numerator of x'(x, x) - x
  double jacobian[2][2] = {{0, 0}, {0, 0}};
  double spectral_radius = 0;
  bool attracting = false;
};
/// Throws std::runtime_error when either check fails.
FixedPointData fixed_point_data();

}  // namespace phm
