#include "phm/degrees.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace phm {

UPoly IntPolynomial::to_upoly() const {
  std::vector<Rational> c;
  c.reserve(coeffs.size());
  for (const auto& z : coeffs) c.emplace_back(z);
  return UPoly(std::move(c));
}

std::string IntPolynomial::str(const std::string& var) const { return to_upoly().str(var); }

IntegerMatrix to_integer_matrix(const IntMatrix& m) {
  IntegerMatrix out(5, std::vector<Integer>(5));
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) out[i][j] = m[i][j];
  }
  return out;
}

IntPolynomial char_poly(const IntegerMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw std::invalid_argument("char_poly: matrix is not square");
  }
  // p holds det(t I - A_r) for the leading r x r block, descending powers.
  std::vector<Integer> p{1};
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<Integer> q(r + 2);
    q[0] = 1;
    q[1] = -m[r][r];
    // w = A_r^k C, starting from the column above the diagonal.
    std::vector<Integer> w(r);
    for (std::size_t i = 0; i < r; ++i) w[i] = m[i][r];
    for (std::size_t k = 0; k < r; ++k) {
      Integer dot = 0;
      for (std::size_t i = 0; i < r; ++i) dot += m[r][i] * w[i];
      q[k + 2] = -dot;
      std::vector<Integer> next(r, Integer(0));
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) next[i] += m[i][j] * w[j];
      }
      w = std::move(next);
    }
    std::vector<Integer> np(r + 2, Integer(0));
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= std::min(i, r); ++j) np[i] += q[i - j] * p[j];
    }
    p = std::move(np);
  }
  return IntPolynomial{std::vector<Integer>(p.rbegin(), p.rend())};
}

IntPolynomial char_poly(const IntMatrix& m) { return char_poly(to_integer_matrix(m)); }

IntegerMatrix evaluate_at_matrix(const IntPolynomial& p, const IntegerMatrix& m) {
  const std::size_t n = m.size();
  IntegerMatrix acc(n, std::vector<Integer>(n, Integer(0)));
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
    IntegerMatrix next(n, std::vector<Integer>(n, Integer(0)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) next[i][j] += acc[i][k] * m[k][j];
      }
      next[i][i] += *it;
    }
    acc = std::move(next);
  }
  return acc;
}

SpectralRadius spectral_radius_exact(const IntPolynomial& p, const Rational& width) {
  return spectral_radius(p.to_upoly(), width);
}

bool anticanonical_eigencheck(const IntMatrix& m) {
  const DivisorClass k = anticanonical();
  return apply_matrix(m, k) == 4 * k;
}

bool fibration_divisibility(long l1, long l2) {
  if (l1 < 1 || l2 < 1) throw std::invalid_argument("fibration_divisibility: degrees must be positive");
  return l2 % l1 == 0;
}

std::vector<DegreeGrowthRow> degree_growth(unsigned n_max, const IntMatrix& m) {
  if (n_max < 1 || n_max > 4) throw std::invalid_argument("degree_growth: n_max must be in 1..4");
  std::vector<DegreeGrowthRow> rows;
  const PlaneMap h = heat_map_xy();
  PlaneMap g = h;
  DivisorClass v = basis_vector(Basis::Lx);
  for (unsigned n = 1; n <= n_max; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    if (n > 1) g = compose_reduce(h, g);
    const auto t1 = std::chrono::steady_clock::now();
    v = apply_matrix(m, v);
    DegreeGrowthRow row;
    row.n = n;
    row.symbolic = bidegree(g.comp1.numerator());
    if (v[0] < 0 || v[1] < 0) throw std::domain_error("degree_growth: matrix predicts a negative degree");
    row.predicted = {static_cast<unsigned>(v[0]), static_cast<unsigned>(v[1])};
    row.seconds = std::chrono::duration<double>(t1 - t0).count();
    rows.push_back(row);
  }
  return rows;
}

// ----------------------------------------------------------- preimage count

namespace {

using C = std::complex<long double>;

// Univariate polynomial in x whose roots contain the x-coordinates of the
// common zeros of p and q.
UPoly eliminant(const SparsePoly& p, const SparsePoly& q) {
  if (!p.involves(1) && !q.involves(1)) return UPoly::from_sparse(gcd(p, q), 0);
  return UPoly::from_sparse(resultant(p, q, 1), 0);
}

UPoly strip(UPoly r, const UPoly& g) {
  if (g.degree() < 1) return r;
  while (true) {
    const UPoly d = gcd(r, g);
    if (d.degree() < 1) return r;
    r = exact_divide(r, d).value();
  }
}

C eval_c(const SparsePoly& p, C x, C y) {
  const std::array<C, 2> pt{x, y};
  return p.evaluate_as<C>(std::span<const C>(pt));
}

std::vector<C> y_coefficients(const SparsePoly& p, C x0) {
  std::vector<C> out;
  for (const auto& c : p.coefficients_in(1)) out.push_back(eval_c(c, x0, C(0)));
  return out;
}

long double component_residual(const RatFunc& f, const Rational& c, C x, C y) {
  const C d = eval_c(f.denominator(), x, y);
  if (std::abs(d) < 1e-30L) return INFINITY;
  return std::abs(eval_c(f.numerator(), x, y) / d - C(to_long_double(c)));
}

}  // namespace

int generic_eliminant_degree(const PlaneMap& f) {
  const std::vector<std::string> vars{"x", "y", "c1", "c2"};
  const std::array<SparsePoly, 2> xy{SparsePoly::variable(vars, 0), SparsePoly::variable(vars, 1)};
  auto lift = [&](const SparsePoly& p) { return p.compose(xy); };
  const SparsePoly p1 = lift(f.comp1.numerator()) - SparsePoly::variable(vars, 2) * lift(f.comp1.denominator());
  const SparsePoly p2 = lift(f.comp2.numerator()) - SparsePoly::variable(vars, 3) * lift(f.comp2.denominator());
  const SparsePoly r = (!p1.involves(1) && !p2.involves(1)) ? gcd(p1, p2) : resultant(p1, p2, 1);
  return r.is_zero() ? -1 : static_cast<int>(r.degree_in(0));
}

PreimageSample count_preimages(const PlaneMap& f, const Rational& c1, const Rational& c2) {
  return count_preimages(f, c1, c2, generic_eliminant_degree(f));
}

PreimageSample count_preimages(const PlaneMap& f, const Rational& c1, const Rational& c2, int generic_degree) {
  if (f.source != Chart::XY || f.target != Chart::XY) throw std::invalid_argument("count_preimages: map must be XY -> XY");
  PreimageSample s{c1, c2, 0, 0, {}, 0};
  const SparsePoly p1 = f.comp1.numerator() - f.comp1.denominator() * c1;
  const SparsePoly p2 = f.comp2.numerator() - f.comp2.denominator() * c2;
  if (p1.is_zero() || p2.is_zero()) throw DegenerateSample("a component is constant at the target value");
  if (!p1.involves(1) && !p2.involves(1)) throw DegenerateSample("no equation involves y");

  UPoly r = eliminant(p1, p2);
  if (r.is_zero()) throw DegenerateSample("resultant vanishes identically");
  s.eliminant_degree = r.degree();
  if (s.eliminant_degree < generic_degree) throw DegenerateSample("eliminant degree drops, preimages escape to infinity");

  // Indeterminacy points and common zeros of the leading coefficients in y
  // solve the system for every target; remove their x-coordinates.
  r = strip(r, eliminant(f.comp1.numerator(), f.comp1.denominator()));
  r = strip(r, eliminant(f.comp2.numerator(), f.comp2.denominator()));
  if (p1.involves(1) && p2.involves(1)) {
    const auto lc1 = p1.coefficients_in(1).back();
    const auto lc2 = p2.coefficients_in(1).back();
    r = strip(r, UPoly::from_sparse(gcd(lc1, lc2), 0));
  }
  s.stripped_degree = r.degree();
  if (r.degree() < 1) return s;
  if (gcd(r, r.derivative()).degree() > 0) throw DegenerateSample("eliminant has a repeated root");

  // Solve in y with the lower-degree equation, check against both.
  const SparsePoly* py = &p1;
  if (!p1.involves(1) || (p2.involves(1) && p2.degree_in(1) < p1.degree_in(1))) py = &p2;
  for (const C& x0 : numeric_roots(r)) {
    std::optional<Preimage> best;
    for (const C& y0 : numeric_roots(y_coefficients(*py, x0))) {
      const long double res = std::max(component_residual(f.comp1, c1, x0, y0), component_residual(f.comp2, c2, x0, y0));
      if (!best || res < best->residual) best = Preimage{x0, y0, res};
    }
    if (!best || !(best->residual < 1e-8L)) {
      std::ostringstream os;
      os << "root x = " << x0 << " has no preimage within tolerance";
      throw DegenerateSample(os.str());
    }
    s.max_residual = std::max(s.max_residual, best->residual);
    s.preimages.push_back(*best);
  }
  return s;
}

TopologicalDegree topological_degree(const PlaneMap& f, unsigned samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("topological_degree: need at least one sample");
  TopologicalDegree out;
  out.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-30, 30);
  std::uniform_int_distribution<long> den(1, 12);
  const int generic = generic_eliminant_degree(f);
  const unsigned max_attempts = 20 * samples + 20;
  for (unsigned attempt = 0; attempt < max_attempts && out.samples.size() < samples; ++attempt) {
    const Rational c1 = make_rational(num(rng), den(rng));
    const Rational c2 = make_rational(num(rng), den(rng));
    try {
      out.samples.push_back(count_preimages(f, c1, c2, generic));
    } catch (const DegenerateSample& e) {
      out.degenerate_log.push_back("(" + to_string(c1) + ", " + to_string(c2) + "): " + e.what());
    }
  }
  if (out.samples.size() < samples) return out;
  const std::size_t d = out.samples.front().preimages.size();
  for (const auto& s : out.samples) {
    if (s.preimages.size() != d) return out;
  }
  out.degree = static_cast<unsigned>(d);
  return out;
}

TopologicalDegree topological_degree(unsigned samples, std::uint64_t seed) {
  return topological_degree(heat_map_xy(), samples, seed);
}

}  // namespace phm
