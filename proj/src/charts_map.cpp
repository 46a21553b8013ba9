#include "phm/charts_map.hpp"

#include <algorithm>
#include <sstream>

namespace phm {

std::string chart_name(Chart c) {
  switch (c) {
    case Chart::XY: return "XY";
    case Chart::UY: return "UY";
    case Chart::XV: return "XV";
    case Chart::UV: return "UV";
    case Chart::AM1: return "AM1";
    case Chart::BN1: return "BN1";
    case Chart::UM2: return "UM2";
    case Chart::YN2: return "YN2";
    case Chart::VM3: return "VM3";
    case Chart::XN3: return "XN3";
  }
  throw std::invalid_argument("unknown chart");
}

std::vector<std::string> chart_variables(Chart c) {
  switch (c) {
    case Chart::XY: return {"x", "y"};
    case Chart::UY: return {"u", "y"};
    case Chart::XV: return {"x", "v"};
    case Chart::UV: return {"u", "v"};
    case Chart::AM1: return {"a", "m1"};
    case Chart::BN1: return {"b", "n1"};
    case Chart::UM2: return {"u", "m2"};
    case Chart::YN2: return {"y", "n2"};
    case Chart::VM3: return {"v", "m3"};
    case Chart::XN3: return {"x", "n3"};
  }
  throw std::invalid_argument("unknown chart");
}

bool is_base_chart(Chart c) {
  return c == Chart::XY || c == Chart::UY || c == Chart::XV || c == Chart::UV;
}

// ------------------------------------------------------------------ RatFunc

namespace {

// Moves constants into the unit and makes every factor primitive.
void normalize(Rational& unit, FactorList& list, bool in_numerator) {
  FactorList out;
  for (auto& [p, e] : list) {
    if (e == 0) continue;
    if (p.is_zero()) {
      if (!in_numerator) throw std::domain_error("RatFunc: zero denominator");
      unit = 0;
      continue;
    }
    SparsePoly prim = p.primitive();
    Rational scale = p.leading_coefficient() / prim.leading_coefficient();
    Rational power = 1;
    for (unsigned k = 0; k < e; ++k) power *= scale;
    if (in_numerator) unit *= power;
    else unit /= power;
    if (prim.is_constant()) continue;
    auto add = [&out](SparsePoly q, unsigned k) {
      auto same = std::find_if(out.begin(), out.end(), [&](const Factor& f) { return f.first == q; });
      if (same != out.end()) same->second += k;
      else out.emplace_back(std::move(q), k);
    };
    // Split off powers of the variables.
    if (prim.size() > 1) {
      for (std::size_t v = 0; v < prim.num_variables(); ++v) {
        unsigned low = kMaxExponent;
        for (const auto& [m, c] : prim.terms()) low = std::min(low, m.exponent(v));
        if (low == 0) continue;
        const SparsePoly var = SparsePoly::variable(prim.variables(), v);
        prim = exact_divide(prim, var.pow(low)).value();
        add(var, low * e);
      }
    }
    add(std::move(prim), e);
  }
  list = std::move(out);
}

void cancel(Rational& unit, FactorList& num, FactorList& den) {
  normalize(unit, num, true);
  normalize(unit, den, false);
  if (unit == 0) {
    num.clear();
    den.clear();
    return;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < num.size() && !changed; ++i) {
      for (std::size_t j = 0; j < den.size() && !changed; ++j) {
        const SparsePoly g = gcd(num[i].first, den[j].first);
        if (g.is_constant()) continue;
        const unsigned a = num[i].second;
        const unsigned b = den[j].second;
        const unsigned m = std::min(a, b);
        SparsePoly nq = exact_divide(num[i].first, g).value();
        SparsePoly dq = exact_divide(den[j].first, g).value();
        num[i] = {std::move(nq), a};
        den[j] = {std::move(dq), b};
        if (a > m) num.emplace_back(g, a - m);
        if (b > m) den.emplace_back(g, b - m);
        normalize(unit, num, true);
        normalize(unit, den, false);
        changed = true;
      }
    }
  }
}

SparsePoly expand_factors(const FactorList& list, const std::vector<std::string>& vars) {
  SparsePoly acc(vars, Rational(1));
  for (const auto& [p, e] : list) acc *= p.pow(e);
  return acc;
}

std::string factors_text(const Rational& unit, const FactorList& list, bool with_unit) {
  std::ostringstream os;
  bool first = true;
  if (with_unit && unit != 1) {
    os << to_string(unit);
    first = false;
  }
  for (const auto& [p, e] : list) {
    if (!first) os << "*";
    os << "(" << p.str() << ")";
    if (e > 1) os << "^" << e;
    first = false;
  }
  if (first) os << "1";
  return os.str();
}

}  // namespace

RatFunc::RatFunc(Rational unit, FactorList num, FactorList den, std::vector<std::string> vars)
    : vars_(std::move(vars)), unit_(std::move(unit)), num_(std::move(num)), den_(std::move(den)) {
  for (auto* list : {&num_, &den_}) {
    for (auto& f : *list) f.first = f.first.renamed(vars_);
  }
  cancel(unit_, num_, den_);
  expand();
}

RatFunc RatFunc::from_polys(const SparsePoly& num, const SparsePoly& den) {
  std::vector<std::string> vars = num.variables().empty() ? den.variables() : num.variables();
  return RatFunc(Rational(1), {{num, 1}}, {{den, 1}}, vars);
}

RatFunc RatFunc::constant(const Rational& c, std::vector<std::string> vars) {
  return RatFunc(c, {}, {}, std::move(vars));
}

void RatFunc::expand() {
  num_poly_ = expand_factors(num_, vars_) * unit_;
  den_poly_ = expand_factors(den_, vars_);
}

RatFunc RatFunc::reciprocal() const {
  if (is_zero()) throw std::domain_error("reciprocal of zero");
  return RatFunc(1 / unit_, den_, num_, vars_);
}

bool RatFunc::same_function(const RatFunc& o) const {
  return num_poly_ * o.den_poly_ == o.num_poly_ * den_poly_;
}

RatFunc RatFunc::permuted(std::span<const std::size_t> perm) const {
  FactorList n;
  FactorList d;
  for (const auto& [p, e] : num_) n.emplace_back(p.permuted(perm).renamed(vars_), e);
  for (const auto& [p, e] : den_) d.emplace_back(p.permuted(perm).renamed(vars_), e);
  return RatFunc(unit_, std::move(n), std::move(d), vars_);
}

RatFunc RatFunc::substitute(std::size_t var, const Rational& value) const {
  FactorList n;
  FactorList d;
  for (const auto& [p, e] : num_) n.emplace_back(p.substitute(var, value), e);
  for (const auto& [p, e] : den_) d.emplace_back(p.substitute(var, value), e);
  return RatFunc(unit_, std::move(n), std::move(d), vars_);
}

RatFunc RatFunc::substitute(std::size_t var, const RatFunc& value) const {
  // Homogenize each factor in the substituted variable.
  FactorList n;
  FactorList d;
  long den_power = 0;
  auto sub = [&](const SparsePoly& p) {
    const auto coeffs = p.coefficients_in(var);
    const unsigned deg = static_cast<unsigned>(coeffs.size() - 1);
    SparsePoly acc(vars_);
    SparsePoly npow(vars_, Rational(1));
    std::vector<SparsePoly> dpow{SparsePoly(vars_, Rational(1))};
    for (unsigned k = 1; k <= deg; ++k) dpow.push_back(dpow.back() * value.denominator());
    for (unsigned k = 0; k <= deg; ++k) {
      if (!coeffs[k].is_zero()) acc += coeffs[k] * npow * dpow[deg - k];
      npow *= value.numerator();
    }
    return std::make_pair(acc, deg);
  };
  for (const auto& [p, e] : num_) {
    auto [q, deg] = sub(p);
    n.emplace_back(q, e);
    den_power -= static_cast<long>(deg * e);
  }
  for (const auto& [p, e] : den_) {
    auto [q, deg] = sub(p);
    d.emplace_back(q, e);
    den_power += static_cast<long>(deg * e);
  }
  FactorList& target = den_power >= 0 ? n : d;
  for (const auto& [p, e] : value.den_factors()) target.emplace_back(p, e * static_cast<unsigned>(std::labs(den_power)));
  return RatFunc(unit_, std::move(n), std::move(d), vars_);
}

std::string RatFunc::str() const {
  std::ostringstream os;
  os << factors_text(unit_, num_, true);
  if (!den_.empty()) os << " / " << factors_text(Rational(1), den_, false);
  return os.str();
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  FactorList n = a.num_;
  FactorList d = a.den_;
  n.insert(n.end(), b.num_.begin(), b.num_.end());
  d.insert(d.end(), b.den_.begin(), b.den_.end());
  return RatFunc(a.unit_ * b.unit_, std::move(n), std::move(d), a.vars_);
}

// ------------------------------------------------------------------- curves

namespace curves {
namespace {
const std::vector<std::string> kXY{"x", "y"};
SparsePoly xy(const char* text) { return SparsePoly::parse(text, kXY); }
}  // namespace

SparsePoly C1() { return xy("x*y - 1"); }
SparsePoly C2() { return xy("2*x*y + x + y - 4"); }
SparsePoly C3() { return xy("x^2*y^2 - 6*x*y - y + 6"); }
SparsePoly C4() { return xy("x^2*y^2 - 6*x*y - x + 6"); }
SparsePoly C5() {
  return xy(
      "x^6*y^6 - x^6*y^3 - 10*x^5*y^5 + 2*x^5*y^4 - 4*x^5*y^3 + 3*x^5*y^2 + 2*x^4*y^5"
      " + 39*x^4*y^4 - 12*x^4*y^3 + 10*x^4*y^2 - 3*x^4*y - x^3*y^6 - 4*x^3*y^5"
      " - 12*x^3*y^4 - 47*x^3*y^3 + 22*x^3*y^2 - 12*x^3*y + 3*x^2*y^5 + 10*x^2*y^4"
      " + 22*x^2*y^3 - 2*x^2*y^2 - 6*x^2*y + 9*x^2 - 3*x*y^4 - 12*x*y^3 - 6*x*y^2"
      " + 21*x*y - 9*x + 9*y^2 - 9*y");
}
SparsePoly C6() { return xy("x*y^2 + 2*x*y - 3"); }
SparsePoly C7() { return xy("x^2*y + 2*x*y - 3"); }
SparsePoly D6() { return xy("x*y^2 + 4*x*y + x - y - 5"); }
SparsePoly D7() { return xy("x^2*y + 4*x*y - x + y - 5"); }
SparsePoly K1() { return xy("x*y - y - 3"); }
SparsePoly K2() { return xy("x*y - x - 3"); }
}  // namespace curves

// -------------------------------------------------------------- chart maps

namespace {

RatFunc poly_fn(const char* text, const std::vector<std::string>& vars) {
  return RatFunc(Rational(1), {{SparsePoly::parse(text, vars), 1}}, {}, vars);
}

RatFunc frac_fn(const char* num, const char* den, const std::vector<std::string>& vars) {
  return RatFunc(Rational(1), {{SparsePoly::parse(num, vars), 1}}, {{SparsePoly::parse(den, vars), 1}}, vars);
}

// Map from chart c into XY.
PlaneMap to_xy(Chart c) {
  const auto v = chart_variables(c);
  PlaneMap m{c, Chart::XY, {}, {}};
  switch (c) {
    case Chart::XY: m.comp1 = poly_fn("x", v); m.comp2 = poly_fn("y", v); break;
    case Chart::UY: m.comp1 = frac_fn("1", "u", v); m.comp2 = poly_fn("y", v); break;
    case Chart::XV: m.comp1 = poly_fn("x", v); m.comp2 = frac_fn("1", "v", v); break;
    case Chart::UV: m.comp1 = frac_fn("1", "u", v); m.comp2 = frac_fn("1", "v", v); break;
    case Chart::AM1: m.comp1 = poly_fn("1 + a", v); m.comp2 = poly_fn("1 + a*m1", v); break;
    case Chart::BN1: m.comp1 = poly_fn("1 + b*n1", v); m.comp2 = poly_fn("1 + b", v); break;
    case Chart::UM2: m.comp1 = frac_fn("1", "u", v); m.comp2 = poly_fn("m2*u", v); break;
    case Chart::YN2: m.comp1 = frac_fn("1", "n2*y", v); m.comp2 = poly_fn("y", v); break;
    case Chart::VM3: m.comp1 = poly_fn("m3*v", v); m.comp2 = frac_fn("1", "v", v); break;
    case Chart::XN3: m.comp1 = poly_fn("x", v); m.comp2 = frac_fn("1", "n3*x", v); break;
  }
  return m;
}

// Map from XY into chart c.
PlaneMap from_xy(Chart c) {
  const std::vector<std::string> v{"x", "y"};
  PlaneMap m{Chart::XY, c, {}, {}};
  switch (c) {
    case Chart::XY: m.comp1 = poly_fn("x", v); m.comp2 = poly_fn("y", v); break;
    case Chart::UY: m.comp1 = frac_fn("1", "x", v); m.comp2 = poly_fn("y", v); break;
    case Chart::XV: m.comp1 = poly_fn("x", v); m.comp2 = frac_fn("1", "y", v); break;
    case Chart::UV: m.comp1 = frac_fn("1", "x", v); m.comp2 = frac_fn("1", "y", v); break;
    case Chart::AM1: m.comp1 = poly_fn("x - 1", v); m.comp2 = frac_fn("y - 1", "x - 1", v); break;
    case Chart::BN1: m.comp1 = poly_fn("y - 1", v); m.comp2 = frac_fn("x - 1", "y - 1", v); break;
    case Chart::UM2: m.comp1 = frac_fn("1", "x", v); m.comp2 = poly_fn("x*y", v); break;
    case Chart::YN2: m.comp1 = poly_fn("y", v); m.comp2 = frac_fn("1", "x*y", v); break;
    case Chart::VM3: m.comp1 = frac_fn("1", "y", v); m.comp2 = poly_fn("x*y", v); break;
    case Chart::XN3: m.comp1 = poly_fn("x", v); m.comp2 = frac_fn("1", "x*y", v); break;
  }
  return m;
}

}  // namespace

PlaneMap heat_map_xy() {
  using namespace curves;
  const std::vector<std::string> v{"x", "y"};
  PlaneMap h{Chart::XY, Chart::XY, {}, {}};
  h.comp1 = RatFunc(Rational(1), {{C6(), 1}, {C4(), 1}}, {{D6(), 1}, {C3(), 1}}, v);
  h.comp2 = RatFunc(Rational(1), {{C7(), 1}, {C3(), 1}}, {{D7(), 1}, {C4(), 1}}, v);
  return h;
}

PlaneMap identity_map(Chart c) {
  const auto v = chart_variables(c);
  PlaneMap m{c, c, {}, {}};
  m.comp1 = RatFunc(Rational(1), {{SparsePoly::variable(v, 0), 1}}, {}, v);
  m.comp2 = RatFunc(Rational(1), {{SparsePoly::variable(v, 1), 1}}, {}, v);
  return m;
}

PlaneMap chart_change(Chart from, Chart to) {
  if (from == to) return identity_map(from);
  if (from == Chart::XY) return from_xy(to);
  if (to == Chart::XY) return to_xy(from);
  return compose_reduce(from_xy(to), to_xy(from));
}

PlaneMap transport(const PlaneMap& f_xy, Chart source, Chart target) {
  if (f_xy.source != Chart::XY || f_xy.target != Chart::XY) {
    throw std::invalid_argument("transport: map must be written XY -> XY");
  }
  PlaneMap g = f_xy;
  if (source != Chart::XY) g = compose_reduce(g, to_xy(source));
  if (target != Chart::XY) g = compose_reduce(from_xy(target), g);
  return g;
}

RatFunc split_known(const RatFunc& f, std::span<const SparsePoly> known) {
  auto split = [&](const FactorList& list) {
    FactorList out;
    for (const auto& [p, e] : list) {
      const TrialDivision td = trial_divide(p, known);
      for (std::size_t i = 0; i < known.size(); ++i) {
        if (td.exponents[i] > 0) out.emplace_back(known[i], td.exponents[i] * e);
      }
      out.emplace_back(td.residual, e);
    }
    return out;
  };
  return RatFunc(f.unit(), split(f.num_factors()), split(f.den_factors()), f.variables());
}

std::vector<SparsePoly> known_xy_factors() {
  using namespace curves;
  return {C1(), C2(), C3(), C4(), C5(), C6(), C7(), D6(), D7(), K1(), K2()};
}

PlaneMap heat_map(Chart source, Chart target) {
  PlaneMap h = transport(heat_map_xy(), source, target);
  if (source == Chart::XY) {
    const auto known = known_xy_factors();
    h.comp1 = split_known(h.comp1, known);
    h.comp2 = split_known(h.comp2, known);
  }
  return h;
}

// ------------------------------------------------------------- composition

namespace {

struct PowerCache {
  const SparsePoly* base;
  std::vector<SparsePoly> powers;
  const SparsePoly& get(unsigned k) {
    if (powers.empty()) powers.emplace_back(base->variables(), Rational(1));
    while (powers.size() <= k) powers.push_back(powers.back() * *base);
    return powers[k];
  }
};

// Factor p(s, t) after s := n1/d1, t := n2/d2, times d1^deg_s(p) d2^deg_t(p).
SparsePoly homogenized(const SparsePoly& p, PowerCache& n1, PowerCache& d1, PowerCache& n2, PowerCache& d2,
                       const std::vector<std::string>& vars) {
  const unsigned ds = p.degree_in(0);
  const unsigned dt = p.degree_in(1);
  const auto by_t = p.coefficients_in(1);
  SparsePoly acc(vars);
  for (unsigned j = 0; j <= dt; ++j) {
    if (by_t[j].is_zero()) continue;
    SparsePoly inner(vars);
    for (const auto& [m, c] : by_t[j].terms()) {
      const unsigned i = m.exponent(0);
      inner += n1.get(i) * d1.get(ds - i) * c;
    }
    acc += inner * (n2.get(j) * d2.get(dt - j));
  }
  return acc;
}

Bidegree list_bidegree(const FactorList& list) {
  Bidegree b;
  for (const auto& [p, e] : list) {
    const Bidegree d = bidegree(p);
    b.dx += d.dx * e;
    b.dy += d.dy * e;
  }
  return b;
}

}  // namespace

PlaneMap compose_reduce(const PlaneMap& f, const PlaneMap& g, CompositionLog* log) {
  if (g.target != f.source) throw std::invalid_argument("compose_reduce: chart mismatch");
  const auto vars = chart_variables(g.source);
  const SparsePoly n1 = g.comp1.numerator();
  const SparsePoly d1 = g.comp1.denominator();
  const SparsePoly n2 = g.comp2.numerator();
  const SparsePoly d2 = g.comp2.denominator();
  PowerCache cn1{&n1, {}}, cd1{&d1, {}}, cn2{&n2, {}}, cd2{&d2, {}};

  PlaneMap out{g.source, f.target, {}, {}};
  for (std::size_t k = 0; k < 2; ++k) {
    const RatFunc& comp = f.comp(k);
    FactorList num;
    FactorList den;
    long e1 = 0;
    long e2 = 0;
    Rational unit = comp.unit();
    // A monomial factor keeps the factorization of the inner numerators.
    auto push = [&](const SparsePoly& p, unsigned e, FactorList& side, bool numerator) {
      if (p.size() != 1) {
        side.emplace_back(homogenized(p, cn1, cd1, cn2, cd2, vars), e);
        return;
      }
      const Monomial m = p.leading_monomial();
      Rational c = p.leading_coefficient();
      for (std::size_t v = 0; v < 2; ++v) {
        const unsigned i = m.exponent(v);
        if (i == 0) continue;
        const RatFunc& inner = g.comp(v);
        if (inner.is_zero()) {
          side.emplace_back(SparsePoly(vars), e);
          continue;
        }
        for (unsigned k = 0; k < i; ++k) c *= inner.unit();
        for (const auto& [q, f] : inner.num_factors()) side.emplace_back(q, f * i * e);
      }
      Rational power = 1;
      for (unsigned k = 0; k < e; ++k) power *= c;
      if (numerator) unit *= power;
      else unit /= power;
    };
    for (const auto& [p, e] : comp.num_factors()) {
      push(p, e, num, true);
      e1 -= static_cast<long>(p.degree_in(0) * e);
      e2 -= static_cast<long>(p.degree_in(1) * e);
    }
    for (const auto& [p, e] : comp.den_factors()) {
      push(p, e, den, false);
      e1 += static_cast<long>(p.degree_in(0) * e);
      e2 += static_cast<long>(p.degree_in(1) * e);
    }
    auto attach = [&](const RatFunc& inner, long power) {
      if (power == 0) return;
      FactorList& side = power > 0 ? num : den;
      for (const auto& [p, e] : inner.den_factors()) side.emplace_back(p, e * static_cast<unsigned>(std::labs(power)));
    };
    attach(g.comp1, e1);
    attach(g.comp2, e2);
    for (auto& [p, e] : num) {
      if (p.is_zero()) throw std::domain_error("compose_reduce: composition is nowhere defined");
    }
    RatFunc r(unit, num, den, vars);
    if (log) {
      Bidegree unreduced{};
      for (const auto& [p, e] : num) {
        if (!p.is_zero()) {
          const Bidegree d = bidegree(p);
          unreduced.dx += d.dx * e;
          unreduced.dy += d.dy * e;
        }
      }
      log->unreduced_num[k] = unreduced;
      log->reduced_num[k] = list_bidegree(r.num_factors());
    }
    (k == 0 ? out.comp1 : out.comp2) = std::move(r);
  }
  return out;
}

// -------------------------------------------------------------- evaluation

EvalResult evaluate(const PlaneMap& f, const Rational& s, const Rational& t) {
  const std::array<Rational, 2> pt{s, t};
  std::array<Rational, 2> value;
  InfiniteComponent inf;
  for (std::size_t k = 0; k < 2; ++k) {
    const Rational n = f.comp(k).numerator().evaluate(pt);
    const Rational d = f.comp(k).denominator().evaluate(pt);
    if (d == 0 && n == 0) return Indeterminate{};
    if (d == 0) inf.components.push_back(k);
    else value[k] = n / d;
  }
  if (!inf.components.empty()) return inf;
  return Finite{value[0], value[1]};
}

bool indeterminate_in_all_charts(const PlaneMap& f_xy, const Rational& x, const Rational& y) {
  for (Chart c : kBaseCharts) {
    const PlaneMap g = transport(f_xy, Chart::XY, c);
    if (!std::holds_alternative<Indeterminate>(evaluate(g, x, y))) return false;
  }
  return true;
}

std::optional<P1Point> evaluate_p1(const PlaneMap& f_xy, const Rational& x, const Rational& y) {
  const std::array<Rational, 2> pt{x, y};
  P1Point out;
  for (std::size_t k = 0; k < 2; ++k) {
    const Rational n = f_xy.comp(k).numerator().evaluate(pt);
    const Rational d = f_xy.comp(k).denominator().evaluate(pt);
    if (n == 0 && d == 0) return std::nullopt;
    std::optional<Rational> v;
    if (d != 0) v = n / d;
    (k == 0 ? out.x : out.y) = v;
  }
  return out;
}

std::string to_string(const P1Point& p) {
  auto one = [](const std::optional<Rational>& v) { return v ? to_string(*v) : std::string("inf"); };
  return "(" + one(p.x) + ", " + one(p.y) + ")";
}

// ---------------------------------------------------------------- Jacobian

SparsePoly jacobian_numerator(const PlaneMap& f) {
  const SparsePoly& n1 = f.comp1.numerator();
  const SparsePoly& d1 = f.comp1.denominator();
  const SparsePoly& n2 = f.comp2.numerator();
  const SparsePoly& d2 = f.comp2.denominator();
  auto partial = [](const SparsePoly& n, const SparsePoly& d, std::size_t v) {
    return n.derivative(v) * d - n * d.derivative(v);
  };
  const SparsePoly j = partial(n1, d1, 0) * partial(n2, d2, 1) - partial(n1, d1, 1) * partial(n2, d2, 0);
  if (j.is_zero()) return j;
  // The determinant's denominator is d1^2 d2^2; cancel against it.
  RatFunc r(Rational(1), {{j, 1}}, {{d1, 2}, {d2, 2}}, j.variables());
  return r.numerator();
}

CriticalFactors jacobian_critical_factors(const PlaneMap& f_xy,
                                          const std::vector<std::pair<std::string, SparsePoly>>& candidates,
                                          const std::vector<SparsePoly>& allowed_residual_factors) {
  if (f_xy.source != Chart::XY) throw std::invalid_argument("jacobian_critical_factors: source must be XY");
  std::vector<SparsePoly> polys;
  for (const auto& c : candidates) polys.push_back(c.second);
  std::vector<unsigned> best(candidates.size(), 0);
  CriticalFactors out;
  for (Chart c : kBaseCharts) {
    const PlaneMap g = f_xy.target == c ? f_xy : compose_reduce(chart_change(f_xy.target, c), f_xy);
    const SparsePoly j = jacobian_numerator(g);
    if (j.is_zero()) throw std::domain_error("jacobian_critical_factors: map is not dominant");
    const TrialDivision td = trial_divide(j, polys);
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], td.exponents[i]);
    if (c == Chart::XY) out.residual = td.residual;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (best[i] > 0) out.factors.push_back({candidates[i].first, candidates[i].second, best[i]});
  }
  const TrialDivision rest = trial_divide(out.residual, allowed_residual_factors);
  out.residual_explained = rest.residual.is_constant();
  return out;
}

bool check_reflection_symmetry(const PlaneMap& f) {
  const std::array<std::size_t, 2> swap{1, 0};
  // (R o f)_1 = f_2 and (f o R)_1 = f_1(t, s); likewise for the second component.
  return f.comp2.same_function(f.comp1.permuted(swap)) && f.comp1.same_function(f.comp2.permuted(swap));
}

}  // namespace phm
