#include "phm/exact_poly.hpp"

#include <algorithm>
#include <numeric>

namespace phm {

namespace {

std::vector<std::string> merged_names(const SparsePoly& a, const SparsePoly& b) {
  if (a.variables().empty()) return b.variables();
  if (b.variables().empty() || a.variables() == b.variables()) return a.variables();
  throw std::invalid_argument("polynomials over different variable lists");
}

SparsePoly one_like(const std::vector<std::string>& vars) { return SparsePoly(vars, Rational(1)); }

}  // namespace

std::optional<SparsePoly> exact_divide(const SparsePoly& p, const SparsePoly& q) {
  if (q.is_zero()) throw std::domain_error("exact_divide: division by the zero polynomial");
  const auto vars = merged_names(p, q);
  if (p.is_zero()) return SparsePoly(vars);
  if (q.is_constant()) return (p / q.constant_term()).renamed(vars);
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (p.degree_in(v) < q.degree_in(v)) return std::nullopt;
  }
  if (p.total_degree() < q.total_degree()) return std::nullopt;

  const Monomial lq = q.leading_monomial();
  const Rational lcq = q.leading_coefficient();
  SparsePoly r = p.renamed(vars);
  SparsePoly quotient(vars);
  while (!r.is_zero()) {
    const Monomial lr = r.leading_monomial();
    if (!lq.divides(lr)) return std::nullopt;
    const Monomial mt = lr / lq;
    const Rational ct = r.leading_coefficient() / lcq;
    quotient.add_term(mt, ct);
    for (const auto& [m, c] : q.terms()) r.add_term(m * mt, -c * ct);
  }
  return quotient;
}

unsigned vanishing_order(const SparsePoly& p, const SparsePoly& q) {
  if (p.is_zero()) throw std::domain_error("vanishing_order: order along q of the zero polynomial is undefined");
  if (q.is_constant()) throw std::domain_error("vanishing_order: q must be nonconstant");
  unsigned k = 0;
  SparsePoly cur = p;
  while (auto next = exact_divide(cur, q)) {
    cur = std::move(*next);
    ++k;
  }
  return k;
}

unsigned multiplicity_at_point(const SparsePoly& p, std::span<const Rational> pt) {
  if (p.is_zero()) throw std::domain_error("multiplicity_at_point: zero polynomial");
  if (pt.size() < p.num_variables()) throw std::invalid_argument("multiplicity_at_point: point dimension");
  SparsePoly shifted = p;
  const auto& vars = p.variables();
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (pt[v] == 0) continue;
    SparsePoly moved = SparsePoly::variable(vars, v) + SparsePoly(vars, pt[v]);
    shifted = shifted.substitute(v, moved);
  }
  return shifted.lowest_total_degree();
}

// ----------------------------------------------------------------------- gcd

namespace {

Integer max_norm(const SparsePoly& p) {
  Integer best = 0;
  for (const auto& [m, c] : p.terms()) {
    Integer a = abs(c.get_num());
    if (a > best) best = a;
  }
  return best;
}

Integer integer_content(const SparsePoly& p) {
  Integer g = 0;
  for (const auto& [m, c] : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
  return g;
}

SparsePoly interpolate(SparsePoly h, const Integer& xi, std::size_t var) {
  SparsePoly out(h.variables());
  unsigned power = 0;
  while (!h.is_zero()) {
    SparsePoly digit(h.variables());
    for (const auto& [m, c] : h.terms()) {
      Integer r = symmetric_mod(c.get_num(), xi);
      if (r != 0) digit.add_term(m, Rational(r));
    }
    for (const auto& [m, c] : digit.terms()) out.add_term(m.with_exponent(var, power), c);
    h -= digit;
    h /= Rational(xi);
    ++power;
  }
  return out;
}

// Heuristic gcd of nonzero integer polynomials over the active variables.
std::optional<SparsePoly> heuristic_gcd(const SparsePoly& f, const SparsePoly& g,
                                        std::vector<std::size_t> active) {
  const auto& vars = f.variables();
  while (!active.empty() && !f.involves(active.back()) && !g.involves(active.back())) active.pop_back();
  Integer cf = integer_content(f);
  Integer cg = integer_content(g);
  Integer common;
  mpz_gcd(common.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  if (active.empty()) return SparsePoly(vars, Rational(common));

  const SparsePoly fp = f / Rational(common);
  const SparsePoly gp = g / Rational(common);
  const std::size_t var = active.back();
  active.pop_back();

  const Integer fn = max_norm(fp);
  const Integer gn = max_norm(gp);
  const Integer b = 2 * std::min(fn, gn) + 29;
  Integer sqrt_b;
  mpz_sqrt(sqrt_b.get_mpz_t(), b.get_mpz_t());
  Integer xi = std::min(b, Integer(99 * sqrt_b));
  const Integer lf = abs(fp.leading_coefficient().get_num());
  const Integer lg = abs(gp.leading_coefficient().get_num());
  const Integer alt = 2 * std::min(Integer(fn / lf), Integer(gn / lg)) + 2;
  if (alt > xi) xi = alt;

  for (int attempt = 0; attempt < 6; ++attempt) {
    const SparsePoly fe = fp.substitute(var, Rational(xi));
    const SparsePoly ge = gp.substitute(var, Rational(xi));
    if (!fe.is_zero() && !ge.is_zero()) {
      if (auto h = heuristic_gcd(fe, ge, active)) {
        SparsePoly candidate = interpolate(*h, xi, var);
        if (!candidate.is_zero()) {
          candidate = candidate.primitive();
          if (exact_divide(fp, candidate) && exact_divide(gp, candidate)) {
            return candidate * Rational(common);
          }
        }
      }
    }
    Integer r1, r2;
    mpz_sqrt(r1.get_mpz_t(), xi.get_mpz_t());
    mpz_sqrt(r2.get_mpz_t(), r1.get_mpz_t());
    xi = xi * 73794 * r2 / 27011;
  }
  return std::nullopt;
}

SparsePoly content_in(const SparsePoly& p, std::size_t var) {
  SparsePoly acc(p.variables());
  for (const auto& c : p.coefficients_in(var)) {
    if (c.is_zero()) continue;
    acc = acc.is_zero() ? c.primitive() : gcd_prs(acc, c);
    if (acc.is_constant()) return one_like(p.variables());
  }
  return acc;
}

SparsePoly primitive_in(const SparsePoly& p, std::size_t var) {
  if (p.is_zero()) return p;
  const SparsePoly c = content_in(p, var);
  return exact_divide(p, c).value().primitive();
}

}  // namespace

SparsePoly pseudo_remainder(const SparsePoly& p, const SparsePoly& q, std::size_t var) {
  if (q.is_zero()) throw std::domain_error("pseudo_remainder: division by zero");
  const unsigned dq = q.degree_in(var);
  const SparsePoly lcq = q.coefficients_in(var)[dq];
  SparsePoly r = p;
  int e = static_cast<int>(p.degree_in(var)) - static_cast<int>(dq) + 1;
  if (e <= 0) return r;
  while (!r.is_zero() && r.degree_in(var) >= dq) {
    const unsigned dr = r.degree_in(var);
    const SparsePoly lcr = r.coefficients_in(var)[dr];
    r = lcq * r - (lcr * q).shifted(var, dr - dq);
    --e;
  }
  if (e > 0) r *= lcq.pow(static_cast<unsigned>(e));
  return r;
}

SparsePoly gcd_prs(const SparsePoly& p, const SparsePoly& q) {
  const auto vars = merged_names(p, q);
  if (p.is_zero() && q.is_zero()) throw std::domain_error("gcd of two zero polynomials");
  if (p.is_zero()) return q.primitive().renamed(vars);
  if (q.is_zero()) return p.primitive().renamed(vars);
  SparsePoly a = p.primitive().renamed(vars);
  SparsePoly b = q.primitive().renamed(vars);
  std::optional<std::size_t> main;
  for (std::size_t v = vars.size(); v-- > 0;) {
    if (a.involves(v) || b.involves(v)) {
      main = v;
      break;
    }
  }
  if (!main) return one_like(vars);
  const std::size_t v = *main;
  if (!a.involves(v)) return gcd_prs(a, content_in(b, v));
  if (!b.involves(v)) return gcd_prs(content_in(a, v), b);

  const SparsePoly ca = content_in(a, v);
  const SparsePoly cb = content_in(b, v);
  const SparsePoly c = gcd_prs(ca, cb);
  a = exact_divide(a, ca).value();
  b = exact_divide(b, cb).value();
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  while (!b.is_zero()) {
    SparsePoly r = pseudo_remainder(a, b, v);
    a = std::move(b);
    b = r.is_zero() ? SparsePoly(vars) : primitive_in(r, v);
  }
  SparsePoly g = primitive_in(a, v);
  if (!g.involves(v)) g = one_like(vars);
  return (c * g).primitive();
}

SparsePoly gcd(const SparsePoly& p, const SparsePoly& q) {
  const auto vars = merged_names(p, q);
  if (p.is_zero() && q.is_zero()) throw std::domain_error("gcd of two zero polynomials");
  if (p.is_zero()) return q.primitive().renamed(vars);
  if (q.is_zero()) return p.primitive().renamed(vars);
  const SparsePoly a = p.primitive().renamed(vars);
  const SparsePoly b = q.primitive().renamed(vars);
  if (a.is_constant() || b.is_constant()) return one_like(vars);
  if (a == b) return a;
  std::vector<std::size_t> active(vars.size());
  std::iota(active.begin(), active.end(), std::size_t{0});
  if (auto h = heuristic_gcd(a, b, active)) return h->primitive();
  return gcd_prs(a, b);
}

SparsePoly squarefree_part(const SparsePoly& p) {
  if (p.is_zero() || p.is_constant()) return p.is_zero() ? p : one_like(p.variables());
  SparsePoly g = p.primitive();
  for (std::size_t v = 0; v < p.num_variables(); ++v) {
    if (!p.involves(v)) continue;
    g = gcd(g, p.derivative(v));
    if (g.is_constant()) break;
  }
  return exact_divide(p, g).value().primitive();
}

// ----------------------------------------------------------------- resultant

SparsePoly determinant(std::vector<std::vector<SparsePoly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return SparsePoly({}, Rational(1));
  std::vector<std::string> vars;
  for (const auto& row : m) {
    if (row.size() != n) throw std::invalid_argument("determinant: matrix not square");
    for (const auto& e : row) {
      if (vars.empty() && !e.variables().empty()) vars = e.variables();
    }
  }
  int sign_flip = 1;
  SparsePoly prev(vars, Rational(1));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t pivot = k + 1;
      while (pivot < n && m[pivot][k].is_zero()) ++pivot;
      if (pivot == n) return SparsePoly(vars);
      std::swap(m[k], m[pivot]);
      sign_flip = -sign_flip;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        SparsePoly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = exact_divide(num, prev).value();
      }
      m[i][k] = SparsePoly(vars);
    }
    prev = m[k][k];
  }
  SparsePoly d = m[n - 1][n - 1];
  if (sign_flip < 0) d = -d;
  return d.renamed(vars.empty() ? d.variables() : vars);
}

SparsePoly resultant(const SparsePoly& p, const SparsePoly& q, std::size_t var) {
  const auto vars = merged_names(p, q);
  if (p.is_zero() || q.is_zero()) return SparsePoly(vars);
  const unsigned m = p.degree_in(var);
  const unsigned n = q.degree_in(var);
  if (m == 0 && n == 0) throw std::invalid_argument("resultant: neither polynomial involves the variable");
  if (m == 0) return p.renamed(vars).pow(n);
  if (n == 0) return q.renamed(vars).pow(m);
  const auto a = p.renamed(vars).coefficients_in(var);
  const auto b = q.renamed(vars).coefficients_in(var);
  const std::size_t size = m + n;
  std::vector<std::vector<SparsePoly>> s(size, std::vector<SparsePoly>(size, SparsePoly(vars)));
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t i = 0; i <= m; ++i) s[row][row + i] = a[m - i];
  }
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t j = 0; j <= n; ++j) s[n + row][row + j] = b[n - j];
  }
  return determinant(std::move(s));
}

Bidegree bidegree(const SparsePoly& p) {
  if (p.is_zero()) throw std::domain_error("bidegree of the zero polynomial");
  Bidegree d;
  if (p.num_variables() > 0) d.dx = p.degree_in(0);
  if (p.num_variables() > 1) d.dy = p.degree_in(1);
  return d;
}

TrialDivision trial_divide(const SparsePoly& p, std::span<const SparsePoly> candidates) {
  TrialDivision out{std::vector<unsigned>(candidates.size(), 0), p};
  if (p.is_zero()) throw std::domain_error("trial_divide: zero polynomial");
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].is_constant()) continue;
    while (auto next = exact_divide(out.residual, candidates[i])) {
      out.residual = std::move(*next);
      ++out.exponents[i];
    }
  }
  return out;
}

}  // namespace phm
