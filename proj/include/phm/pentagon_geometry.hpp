#pragma once

// Projective points and lines, the projective midpoint and the heat map on
// polygons. Templated over the scalar field: Rational for exact work,
// QSqrt5 for the regular pentagon, double for long iterations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "phm/rational.hpp"

namespace phm {

/// a + b sqrt(5) with rational a, b.
class QSqrt5 {
 public:
  QSqrt5() = default;
  QSqrt5(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  QSqrt5(Rational a, Rational b = 0) : a_(std::move(a)), b_(std::move(b)) {}  // NOLINT

  static QSqrt5 sqrt5() { return {Rational(0), Rational(1)}; }
  /// (1 + sqrt 5) / 2.
  static QSqrt5 phi() { return {Rational(1, 2), Rational(1, 2)}; }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  /// Rational norm a^2 - 5 b^2.
  Rational norm() const { return a_ * a_ - 5 * b_ * b_; }
  double to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(5.0); }
  std::string str() const { return to_string(a_) + " + " + to_string(b_) + "*sqrt5"; }

  friend QSqrt5 operator+(const QSqrt5& x, const QSqrt5& y) { return {x.a_ + y.a_, x.b_ + y.b_}; }
  friend QSqrt5 operator-(const QSqrt5& x, const QSqrt5& y) { return {x.a_ - y.a_, x.b_ - y.b_}; }
  friend QSqrt5 operator-(const QSqrt5& x) { return {-x.a_, -x.b_}; }
  friend QSqrt5 operator*(const QSqrt5& x, const QSqrt5& y) {
    return {x.a_ * y.a_ + 5 * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_};
  }
  friend QSqrt5 operator/(const QSqrt5& x, const QSqrt5& y) {
    const Rational n = y.norm();
    if (n == 0) throw std::domain_error("QSqrt5: division by zero");
    return x * QSqrt5(y.a_ / n, -y.b_ / n);
  }
  QSqrt5& operator+=(const QSqrt5& o) { return *this = *this + o; }
  QSqrt5& operator-=(const QSqrt5& o) { return *this = *this - o; }
  QSqrt5& operator*=(const QSqrt5& o) { return *this = *this * o; }
  QSqrt5& operator/=(const QSqrt5& o) { return *this = *this / o; }
  friend bool operator==(const QSqrt5& x, const QSqrt5& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

 private:
  Rational a_ = 0;
  Rational b_ = 0;
};

namespace field {
inline bool is_zero(const Rational& v) { return v == 0; }
inline bool is_zero(const QSqrt5& v) { return v.is_zero(); }
inline bool is_zero(double v) { return v == 0.0; }
inline double to_double(const Rational& v) { return v.get_d(); }
inline double to_double(const QSqrt5& v) { return v.to_double(); }
inline double to_double(double v) { return v; }
}  // namespace field

class CoincidentInputs : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateConfiguration : public std::runtime_error {
 public:
  DegenerateConfiguration(const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), index_(index) {}
  /// Offending vertex window (heat_step) or iteration (converge_to_regular).
  std::optional<std::size_t> index() const { return index_; }

 private:
  std::optional<std::size_t> index_;
};

class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
using Triple = std::array<T, 3>;

template <class T>
struct ProjPoint {
  Triple<T> v;
};

template <class T>
struct ProjLine {
  Triple<T> v;
};

template <class T>
Triple<T> cross(const Triple<T>& a, const Triple<T>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T>
bool is_zero_triple(const Triple<T>& a) {
  return field::is_zero(a[0]) && field::is_zero(a[1]) && field::is_zero(a[2]);
}

template <class T>
T dot(const Triple<T>& a, const Triple<T>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class T>
ProjPoint<T> affine_point(T x, T y) {
  return {{std::move(x), std::move(y), T(1)}};
}

/// Scaled so that the last nonzero coordinate is 1.
template <class T>
ProjPoint<T> canonical(const ProjPoint<T>& p) {
  for (std::size_t i = 3; i-- > 0;) {
    if (!field::is_zero(p.v[i])) {
      const T s = p.v[i];
      return {{p.v[0] / s, p.v[1] / s, p.v[2] / s}};
    }
  }
  throw std::invalid_argument("canonical: zero vector is not a projective point");
}

template <class T>
bool same_point(const ProjPoint<T>& p, const ProjPoint<T>& q) {
  return is_zero_triple(cross(p.v, q.v));
}

template <class T>
bool incident(const ProjPoint<T>& p, const ProjLine<T>& l) {
  return field::is_zero(dot(p.v, l.v));
}

template <class T>
ProjLine<T> join(const ProjPoint<T>& p, const ProjPoint<T>& q) {
  ProjLine<T> l{cross(p.v, q.v)};
  if (is_zero_triple(l.v)) throw CoincidentInputs("join: points coincide");
  return l;
}

template <class T>
ProjPoint<T> meet(const ProjLine<T>& l, const ProjLine<T>& m) {
  ProjPoint<T> p{cross(l.v, m.v)};
  if (is_zero_triple(p.v)) throw CoincidentInputs("meet: lines coincide");
  return p;
}

/// S = BC meet QR with Q = AB meet CD and R = AC meet BD.
template <class T>
ProjPoint<T> projective_midpoint(const ProjPoint<T>& a, const ProjPoint<T>& b, const ProjPoint<T>& c,
                                 const ProjPoint<T>& d) {
  try {
    const ProjPoint<T> q = meet(join(a, b), join(c, d));
    const ProjPoint<T> r = meet(join(a, c), join(b, d));
    return meet(join(b, c), join(q, r));
  } catch (const CoincidentInputs& e) {
    throw DegenerateConfiguration(std::string("projective_midpoint: ") + e.what());
  }
}

template <class T>
using Polygon = std::vector<ProjPoint<T>>;

/// Vertex k of the result is the projective midpoint of edge (k, k+1).
template <class T>
Polygon<T> heat_step(const Polygon<T>& p) {
  const std::size_t n = p.size();
  if (n < 5) throw std::invalid_argument("heat_step: need at least five vertices");
  Polygon<T> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    try {
      out.push_back(projective_midpoint(p[(k + n - 1) % n], p[k], p[(k + 1) % n], p[(k + 2) % n]));
    } catch (const DegenerateConfiguration& e) {
      throw DegenerateConfiguration(e.what(), k);
    }
  }
  return out;
}

template <class T>
struct ProjTransform {
  std::array<Triple<T>, 3> m;

  ProjPoint<T> operator()(const ProjPoint<T>& p) const {
    return {{dot(m[0], p.v), dot(m[1], p.v), dot(m[2], p.v)}};
  }
  Polygon<T> operator()(const Polygon<T>& p) const {
    Polygon<T> out;
    out.reserve(p.size());
    for (const auto& q : p) out.push_back((*this)(q));
    return out;
  }
  T det() const { return dot(m[0], cross(m[1], m[2])); }
  /// Adjugate; inverse up to the scalar det, which is irrelevant projectively.
  ProjTransform adjugate() const {
    const Triple<T> c0 = cross(m[1], m[2]);
    const Triple<T> c1 = cross(m[2], m[0]);
    const Triple<T> c2 = cross(m[0], m[1]);
    return {{Triple<T>{c0[0], c1[0], c2[0]}, Triple<T>{c0[1], c1[1], c2[1]}, Triple<T>{c0[2], c1[2], c2[2]}}};
  }
};

/// The transform sending p1..p4 to (1:0:0), (0:1:0), (0:0:1), (1:1:1).
template <class T>
ProjTransform<T> frame_transform(const ProjPoint<T>& p1, const ProjPoint<T>& p2, const ProjPoint<T>& p3,
                                 const ProjPoint<T>& p4) {
  // A has columns p1, p2, p3; solve A lambda = p4, then B = A diag(lambda)
  // sends the standard frame to p1..p4 and adj(B) inverts it.
  const ProjTransform<T> a{{Triple<T>{p1.v[0], p2.v[0], p3.v[0]}, Triple<T>{p1.v[1], p2.v[1], p3.v[1]},
                            Triple<T>{p1.v[2], p2.v[2], p3.v[2]}}};
  if (field::is_zero(a.det())) throw DegenerateConfiguration("frame_transform: first three vertices are collinear");
  const ProjPoint<T> lambda = a.adjugate()(p4);
  for (const auto& l : lambda.v) {
    if (field::is_zero(l)) throw DegenerateConfiguration("frame_transform: fourth vertex is collinear with two others");
  }
  ProjTransform<T> b = a;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) b.m[i][j] = b.m[i][j] * lambda.v[j];
  }
  return b.adjugate();
}

/// Canonical representative of a pentagon class: the image of vertex 5 in
/// the frame of vertices 1-4.
template <class T>
ProjPoint<T> normalize(const Polygon<T>& p) {
  if (p.size() != 5) throw std::invalid_argument("normalize: expects a pentagon");
  return canonical(frame_transform(p[0], p[1], p[2], p[3])(p[4]));
}

/// The pentagon carried to its normal frame.
template <class T>
Polygon<T> normalized_polygon(const Polygon<T>& p) {
  if (p.size() != 5) throw std::invalid_argument("normalized_polygon: expects a pentagon");
  // The frame vertices are written exactly so rounding cannot leak in.
  return {ProjPoint<T>{{T(1), T(0), T(0)}}, ProjPoint<T>{{T(0), T(1), T(0)}}, ProjPoint<T>{{T(0), T(0), T(1)}},
          ProjPoint<T>{{T(1), T(1), T(1)}}, normalize(p)};
}

/// Affine image of the regular pentagon with vertices (cos 72k, sin 72k / sin 72).
inline Polygon<QSqrt5> regular_pentagon() {
  const QSqrt5 s5 = QSqrt5::sqrt5();
  const QSqrt5 c1 = (s5 - QSqrt5(1)) / QSqrt5(4);   // cos 72
  const QSqrt5 c2 = -(s5 + QSqrt5(1)) / QSqrt5(4);  // cos 144
  const QSqrt5 r2 = (s5 - QSqrt5(1)) / QSqrt5(2);   // sin 144 / sin 72
  return {affine_point<QSqrt5>(1, 0), affine_point<QSqrt5>(c1, 1), affine_point<QSqrt5>(c2, r2),
          affine_point<QSqrt5>(c2, -r2), affine_point<QSqrt5>(c1, -1)};
}

/// Canonical representative of the regular class.
inline ProjPoint<QSqrt5> regular_class() { return normalize(regular_pentagon()); }

inline Polygon<double> to_double(const Polygon<QSqrt5>& p) {
  Polygon<double> out;
  for (const auto& q : p) out.push_back({{q.v[0].to_double(), q.v[1].to_double(), q.v[2].to_double()}});
  return out;
}

/// Max coordinate difference of the dehomogenized fifth vertices.
inline double class_distance(const ProjPoint<double>& a, const ProjPoint<double>& b) {
  if (a.v[2] == 0.0 || b.v[2] == 0.0) return INFINITY;
  return std::max(std::fabs(a.v[0] / a.v[2] - b.v[0] / b.v[2]), std::fabs(a.v[1] / a.v[2] - b.v[1] / b.v[2]));
}

/// First n with distance(class of H^n P, regular class) < tol.
template <class T>
unsigned converge_to_regular(const Polygon<T>& p, double tol, unsigned max_iter) {
  const ProjPoint<QSqrt5> r = regular_class();
  const ProjPoint<double> target{{r.v[0].to_double(), r.v[1].to_double(), r.v[2].to_double()}};
  Polygon<T> cur = p;
  for (unsigned n = 0;; ++n) {
    try {
      cur = normalized_polygon(cur);
      const ProjPoint<T>& c = cur[4];
      const ProjPoint<double> cd{{field::to_double(c.v[0]), field::to_double(c.v[1]), field::to_double(c.v[2])}};
      if (class_distance(cd, target) < tol) return n;
      if (n == max_iter) break;
      cur = heat_step(cur);
    } catch (const DegenerateConfiguration& e) {
      throw DegenerateConfiguration(e.what(), n);
    }
  }
  throw NoConvergence("no convergence to the regular class within " + std::to_string(max_iter) + " iterations");
}

/// Strict convexity in the affine chart z = 1: every edge line has all other
/// vertices strictly on one side.
template <class T>
bool is_convex(const Polygon<T>& p) {
  const std::size_t n = p.size();
  for (const auto& q : p) {
    if (field::is_zero(q.v[2])) return false;
  }
  int orientation = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const ProjLine<T> l = join(p[i], p[(i + 1) % n]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || j == (i + 1) % n) continue;
      // Sign of the determinant [p_i, p_i+1, p_j] with positive z-coordinates.
      const T d = dot(l.v, p[j].v) * p[i].v[2] * p[(i + 1) % n].v[2] * p[j].v[2];
      const double s = field::to_double(d);
      if (field::is_zero(d)) return false;
      const int sign = s > 0 ? 1 : -1;
      if (orientation == 0) orientation = sign;
      if (sign != orientation) return false;
    }
  }
  return true;
}

/// Five rational points on the unit circle at sorted random parameters:
/// always strictly convex.
template <class Rng>
Polygon<Rational> random_convex_pentagon(Rng& rng, long height = 50) {
  std::uniform_int_distribution<long> num(-height, height);
  std::uniform_int_distribution<long> den(1, height);
  std::vector<Rational> t;
  while (t.size() < 5) {
    const Rational v = make_rational(num(rng), den(rng));
    if (std::find(t.begin(), t.end(), v) == t.end()) t.push_back(v);
  }
  std::sort(t.begin(), t.end());
  Polygon<Rational> p;
  for (const auto& s : t) {
    const Rational d = 1 + s * s;
    p.push_back(affine_point<Rational>((1 - s * s) / d, 2 * s / d));
  }
  return p;
}

template <class Rng>
ProjTransform<Rational> random_transform(Rng& rng, long height = 9) {
  std::uniform_int_distribution<long> entry(-height, height);
  while (true) {
    ProjTransform<Rational> t;
    for (auto& row : t.m) {
      for (auto& e : row) e = Rational(entry(rng));
    }
    if (t.det() != 0) return t;
  }
}

inline Polygon<double> to_double(const Polygon<Rational>& p) {
  Polygon<double> out;
  for (const auto& q : p) out.push_back({{q.v[0].get_d(), q.v[1].get_d(), q.v[2].get_d()}});
  return out;
}

/// Vertex relabeling by the dihedral group: i -> shift + sign * i.
template <class T>
Polygon<T> relabel(const Polygon<T>& p, std::size_t shift, bool reflect) {
  const std::size_t n = p.size();
  Polygon<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = p[reflect ? (shift + n - i) % n : (shift + i) % n];
  return out;
}

}  // namespace phm
