#include "phm/upoly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <sstream>

namespace phm {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::from_integers(const std::vector<long>& coeffs) {
  std::vector<Rational> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) c.emplace_back(v);
  return UPoly(std::move(c));
}

UPoly UPoly::from_sparse(const SparsePoly& p, std::size_t var) {
  std::vector<Rational> c(p.is_zero() ? 0 : p.degree_in(var) + 1);
  for (const auto& [m, coef] : p.terms()) {
    for (std::size_t v = 0; v < p.num_variables(); ++v) {
      if (v != var && m.exponent(v) != 0) throw std::invalid_argument("UPoly::from_sparse: polynomial is not univariate");
    }
    c[m.exponent(var)] = coef;
  }
  return UPoly(std::move(c));
}

SparsePoly UPoly::to_sparse(const std::vector<std::string>& vars, std::size_t var) const {
  SparsePoly out(vars);
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] != 0) out.add_term(Monomial::unit(var, static_cast<unsigned>(k)), c_[k]);
  }
  return out;
}

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UPoly::evaluate(const Rational& t) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::complex<long double> UPoly::evaluate(std::complex<long double> t) const {
  std::complex<long double> acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + to_long_double(*it);
  return acc;
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  return *this * Rational(1 / leading());
}

UPoly UPoly::primitive() const {
  if (is_zero()) return *this;
  Integer num = 0;
  Integer den = 1;
  for (const auto& c : c_) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational scale(den, num);
  scale.canonicalize();
  if (leading() < 0) scale = -scale;
  return *this * scale;
}

UPoly UPoly::reversed() const {
  std::vector<Rational> r(c_.rbegin(), c_.rend());
  return UPoly(std::move(r));
}

UPoly UPoly::scaled(const Rational& s) const {
  std::vector<Rational> r(c_);
  Rational power = 1;
  for (auto& c : r) {
    c *= power;
    power *= s;
  }
  return UPoly(std::move(r));
}

UPoly& UPoly::operator+=(const UPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(r));
}

UPoly operator*(UPoly a, const Rational& s) {
  for (auto& c : a.c_) c *= s;
  a.trim();
  return a;
}

std::string UPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = c_.size(); k-- > 0;) {
    if (c_[k] == 0) continue;
    Rational c = c_[k];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    c = abs(c);
    if (k == 0 || c != 1) {
      os << to_string(c);
      if (k > 0) os << "*";
    }
    if (k > 0) os << var;
    if (k > 1) os << "^" << k;
    first = false;
  }
  return os.str();
}

DivMod divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::domain_error("divmod: division by zero polynomial");
  std::vector<Rational> r(a.coeffs());
  const int db = b.degree();
  if (a.degree() < db) return {UPoly{}, a};
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1));
  const Rational inv = 1 / b.leading();
  for (int k = a.degree(); k >= db; --k) {
    const Rational t = r[static_cast<std::size_t>(k)] * inv;
    q[static_cast<std::size_t>(k - db)] = t;
    if (t == 0) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k - db + j)] -= t * b.coeffs()[static_cast<std::size_t>(j)];
  }
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd of two zero polynomials");
  UPoly x = a.primitive();
  UPoly y = b.primitive();
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).remainder.primitive();
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

std::optional<UPoly> exact_divide(const UPoly& a, const UPoly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() < 1) return p.is_zero() ? p : UPoly({Rational(1)});
  return divmod(p, gcd(p, p.derivative())).quotient.primitive();
}

Rational cauchy_bound(const UPoly& p) {
  if (p.degree() < 1) return 1;
  Rational m = 0;
  for (int k = 0; k < p.degree(); ++k) m = std::max(m, Rational(abs(p.coeffs()[static_cast<std::size_t>(k)] / p.leading())));
  return m + 2;
}

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq;
  if (p.is_zero()) return seq;
  auto positive_scale = [](const UPoly& q) {
    UPoly prim = q.primitive();
    return (sgn(prim.leading()) == sgn(q.leading())) ? prim : prim * Rational(-1);
  };
  seq.push_back(positive_scale(p));
  UPoly d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(positive_scale(d));
  while (true) {
    UPoly r = divmod(seq[seq.size() - 2], seq.back()).remainder;
    if (r.is_zero()) break;
    seq.push_back(positive_scale(r * Rational(-1)));
  }
  return seq;
}

namespace {

unsigned sign_changes(const std::vector<UPoly>& seq, const Rational& t) {
  unsigned changes = 0;
  int last = 0;
  for (const auto& q : seq) {
    const int s = q.sign_at(t);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

unsigned count_real_roots(const std::vector<UPoly>& sturm, const Rational& lo, const Rational& hi) {
  const unsigned a = sign_changes(sturm, lo);
  const unsigned b = sign_changes(sturm, hi);
  return a > b ? a - b : 0;
}

std::vector<RootInterval> isolate_real_roots(const UPoly& p) {
  std::vector<RootInterval> out;
  if (p.degree() < 1) return out;
  const UPoly s = squarefree_part(p);
  const auto seq = sturm_sequence(s);
  const Rational bound = cauchy_bound(s);
  std::vector<RootInterval> work{{-bound, bound}};
  while (!work.empty()) {
    RootInterval r = work.back();
    work.pop_back();
    const unsigned n = count_real_roots(seq, r.lo, r.hi);
    if (n == 0) continue;
    if (n == 1) {
      if (s.sign_at(r.hi) == 0) r.lo = r.hi;
      out.push_back(r);
      continue;
    }
    const Rational mid = (r.lo + r.hi) / 2;
    work.push_back({mid, r.hi});
    work.push_back({r.lo, mid});
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.hi < b.hi; });
  return out;
}

RootInterval refine(const UPoly& p, RootInterval r, const Rational& max_width) {
  if (r.exact()) return r;
  const int shi = p.sign_at(r.hi);
  if (shi == 0) return {r.hi, r.hi};
  while (r.width() > max_width) {
    const Rational mid = (r.lo + r.hi) / 2;
    const int sm = p.sign_at(mid);
    if (sm == 0) return {mid, mid};
    if (sm == shi) {
      r.hi = mid;
    } else {
      r.lo = mid;
    }
  }
  return r;
}

Rational simplest_between(Rational lo, Rational hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_between(-hi, -lo);
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rational(fl) == lo) return Rational(fl);
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  const Rational inner = simplest_between(1 / (hi - fl), 1 / (lo - fl));
  return Rational(fl) + 1 / inner;
}

std::vector<Rational> rational_roots(const UPoly& p) {
  std::vector<Rational> out;
  if (p.degree() < 1) return out;
  const UPoly s = squarefree_part(p).primitive();
  const Integer lc = s.leading().get_num();
  const Rational width(Integer(1), Integer(lc * lc * 2));
  for (RootInterval r : isolate_real_roots(s)) {
    r = refine(s, r, width);
    const Rational candidate = r.exact() ? r.lo : simplest_between(r.lo, r.hi);
    // lo itself lies outside the half-open interval.
    if (!r.exact() && candidate == r.lo) continue;
    if (s.evaluate(candidate) == 0) out.push_back(candidate);
  }
  return out;
}

bool roots_inside_unit_disk(const UPoly& p) {
  if (p.is_zero()) throw std::domain_error("roots_inside_unit_disk: zero polynomial");
  UPoly f = p;
  while (f.degree() > 0) {
    const Rational a0 = f.coeff(0);
    const Rational an = f.leading();
    if (abs(a0) >= abs(an)) return false;
    UPoly t = f * an - f.reversed() * a0;
    std::vector<Rational> c(t.coeffs());
    if (c.empty()) return false;
    c.erase(c.begin());
    f = UPoly(std::move(c));
  }
  return true;
}

std::vector<std::complex<long double>> numeric_roots(const std::vector<std::complex<long double>>& coeffs_in) {
  using C = std::complex<long double>;
  std::vector<C> coeffs(coeffs_in);
  while (!coeffs.empty() && coeffs.back() == C(0)) coeffs.pop_back();
  std::vector<C> roots;
  if (coeffs.size() <= 1) return roots;
  std::size_t zeros = 0;
  while (coeffs[zeros] == C(0)) ++zeros;
  roots.assign(zeros, C(0));
  std::vector<C> c(coeffs.begin() + static_cast<long>(zeros), coeffs.end());
  const std::size_t n = c.size() - 1;
  if (n == 0) return roots;
  using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  Mat comp = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1;
  for (std::size_t i = 0; i < n; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Mat> solver(comp, false);
  if (solver.info() != Eigen::Success) throw IsolationFailure("companion eigenvalue iteration did not converge");
  auto eval = [&](C t, C& deriv) {
    C v = 0;
    deriv = 0;
    for (std::size_t k = c.size(); k-- > 0;) {
      deriv = deriv * t + v;
      v = v * t + c[k];
    }
    return v;
  };
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    C z = solver.eigenvalues()(i);
    for (int step = 0; step < 8; ++step) {
      C d;
      const C v = eval(z, d);
      if (d == C(0)) break;
      const C next = z - v / d;
      C d2;
      if (std::abs(eval(next, d2)) >= std::abs(v)) break;
      z = next;
    }
    roots.push_back(z);
  }
  return roots;
}

std::vector<std::complex<long double>> numeric_roots(const UPoly& p) {
  const UPoly m = p.monic();
  std::vector<std::complex<long double>> c;
  c.reserve(m.coeffs().size());
  for (const auto& r : m.coeffs()) c.emplace_back(to_long_double(r), 0.0L);
  return numeric_roots(c);
}

SpectralRadius spectral_radius(const UPoly& p, const Rational& width) {
  if (p.degree() < 1) throw std::invalid_argument("spectral_radius: polynomial must have positive degree");
  const UPoly s = squarefree_part(p);
  const auto rats = rational_roots(s);
  UPoly q = s;
  std::optional<Rational> rho_rat;
  for (const auto& r : rats) {
    q = exact_divide(q, UPoly({-r, Rational(1)})).value();
    if (!rho_rat || abs(r) > *rho_rat) rho_rat = abs(r);
  }

  auto certify_below = [&](const Rational& bound) {
    return q.degree() < 1 || roots_inside_unit_disk(q.scaled(bound));
  };

  auto intervals = isolate_real_roots(q);
  if (intervals.empty()) {
    if (!rho_rat) throw IsolationFailure("no real root; dominant root is non-real");
    if (!certify_below(*rho_rat)) throw IsolationFailure("a non-real root dominates the rational roots");
    return {rho_rat, *rho_rat, *rho_rat};
  }

  Rational w = width;
  for (int round = 0; round < 64; ++round) {
    Rational lo_abs = 0;
    Rational hi_abs = 0;
    bool straddle = false;
    for (auto& r : intervals) {
      r = refine(q, r, w);
      if (r.lo < 0 && r.hi > 0) {
        straddle = true;
        continue;
      }
      const Rational a = std::min(abs(r.lo), abs(r.hi));
      const Rational b = std::max(abs(r.lo), abs(r.hi));
      lo_abs = std::max(lo_abs, a);
      hi_abs = std::max(hi_abs, b);
    }
    if (!straddle) {
      if (rho_rat && *rho_rat >= hi_abs) {
        if (!certify_below(*rho_rat)) throw IsolationFailure("a non-real root dominates the rational roots");
        return {rho_rat, *rho_rat, *rho_rat};
      }
      if (!rho_rat || *rho_rat < lo_abs) {
        if (hi_abs - lo_abs < width) {
          if (!certify_below(hi_abs)) throw IsolationFailure("a non-real root dominates the real roots");
          return {std::nullopt, lo_abs, hi_abs};
        }
      }
    }
    w /= 2;
  }
  throw IsolationFailure("interval refinement stalled");
}

}  // namespace phm
