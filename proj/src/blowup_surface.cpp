#include "phm/blowup_surface.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace phm {

std::string exceptional_name(Exceptional e) {
  switch (e) {
    case Exceptional::E1: return "E1";
    case Exceptional::E2: return "E2";
    case Exceptional::E3: return "E3";
  }
  throw std::invalid_argument("unknown exceptional divisor");
}

Chart exceptional_chart(Exceptional e) {
  switch (e) {
    case Exceptional::E1: return Chart::AM1;
    case Exceptional::E2: return Chart::UM2;
    case Exceptional::E3: return Chart::VM3;
  }
  throw std::invalid_argument("unknown exceptional divisor");
}

Chart exceptional_side_chart(Exceptional e) {
  switch (e) {
    case Exceptional::E1: return Chart::BN1;
    case Exceptional::E2: return Chart::YN2;
    case Exceptional::E3: return Chart::XN3;
  }
  throw std::invalid_argument("unknown exceptional divisor");
}

CurveOnSurface exceptional_curve(Exceptional e) {
  const Chart c = exceptional_chart(e);
  return {exceptional_name(e), c, SparsePoly::variable(chart_variables(c), 0)};
}

PlaneMap lift_map(Chart source, Chart target) { return heat_map(source, target); }

// --------------------------------------------------------------- restriction

bool Restriction::is_constant() const {
  return !value || (value->numerator().is_constant() && value->denominator().is_constant());
}

std::optional<Rational> Restriction::constant_value() const {
  if (!value) return std::nullopt;
  return value->numerator().constant_term() / value->denominator().constant_term();
}

std::string Restriction::str() const { return value ? value->str() : std::string("inf"); }

std::optional<LinearParametrization> linear_parametrization(const SparsePoly& curve) {
  for (std::size_t var : {std::size_t{1}, std::size_t{0}}) {
    if (curve.degree_in(var) != 1) continue;
    const auto c = curve.coefficients_in(var);
    return LinearParametrization{var, -c[0], c[1]};
  }
  return std::nullopt;
}

namespace {

// p with var := num/den, times den^deg_var(p).
SparsePoly restrict_poly(const SparsePoly& p, const LinearParametrization& param) {
  const auto coeffs = p.coefficients_in(param.var);
  const unsigned d = static_cast<unsigned>(coeffs.size() - 1);
  SparsePoly acc(p.variables());
  SparsePoly npow(p.variables(), Rational(1));
  for (unsigned k = 0; k <= d; ++k) {
    if (!coeffs[k].is_zero()) acc += coeffs[k] * npow * param.den.pow(d - k);
    npow *= param.num;
  }
  return acc;
}

std::optional<Rational> p1_component(const P1Point& p, std::size_t k) { return k == 0 ? p.x : p.y; }

}  // namespace

Restriction restrict_component(const RatFunc& comp, const LinearParametrization& param) {
  const SparsePoly n = restrict_poly(comp.numerator(), param);
  const SparsePoly d = restrict_poly(comp.denominator(), param);
  if (n.is_zero() && d.is_zero()) throw std::domain_error("restrict_component: curve lies in the indeterminacy set");
  if (d.is_zero()) return {std::nullopt};
  const auto& vars = comp.variables();
  if (n.is_zero()) return {RatFunc::constant(Rational(0), vars)};
  const unsigned dn = comp.numerator().degree_in(param.var);
  const unsigned dd = comp.denominator().degree_in(param.var);
  return {RatFunc(Rational(1), {{n, 1}, {param.den, dd}}, {{d, 1}, {param.den, dn}}, vars)};
}

std::vector<CurvePoint> rational_points(const SparsePoly& curve, std::size_t max_points, int height) {
  std::vector<Rational> values;
  values.emplace_back(0);
  for (int h = 1; h <= height; ++h) {
    for (int den = 1; den <= h; ++den) {
      const int num = h;
      Rational r(num, den);
      r.canonicalize();
      if (std::find(values.begin(), values.end(), r) != values.end()) continue;
      values.push_back(r);
      values.push_back(-r);
    }
    for (int num = 1; num < h; ++num) {
      Rational r(num, h);
      r.canonicalize();
      if (std::find(values.begin(), values.end(), r) != values.end()) continue;
      values.push_back(r);
      values.push_back(-r);
    }
  }
  std::vector<CurvePoint> out;
  auto add = [&](CurvePoint p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  for (const Rational& v : values) {
    for (std::size_t fixed : {std::size_t{0}, std::size_t{1}}) {
      if (out.size() >= max_points) return out;
      const std::size_t free = 1 - fixed;
      const SparsePoly slice = curve.substitute(fixed, v);
      if (slice.is_zero() || slice.is_constant()) continue;
      for (const Rational& r : rational_roots(UPoly::from_sparse(slice, free))) {
        add(fixed == 0 ? CurvePoint{v, r} : CurvePoint{r, v});
      }
    }
  }
  if (out.size() > max_points) out.resize(max_points);
  return out;
}

// ------------------------------------------------------------ collapse test

CollapseVerdict collapse_test(const CurveOnSurface& curve, const PlaneMap& map) {
  if (map.source != curve.chart) throw std::invalid_argument("collapse_test: curve and map charts differ");
  if (auto param = linear_parametrization(curve.poly)) {
    std::array<Restriction, 2> r{restrict_component(map.comp1, *param), restrict_component(map.comp2, *param)};
    for (std::size_t k = 0; k < 2; ++k) {
      if (!r[k].is_constant()) return NotCollapsed{k, r[k], std::nullopt, std::nullopt};
    }
    return Collapsed{P1Point{r[0].constant_value(), r[1].constant_value()}, "restriction to a rational parametrization"};
  }

  // Rational points, then an exact divisibility certificate for constancy.
  const auto points = rational_points(curve.poly, 24);
  std::vector<std::pair<CurvePoint, P1Point>> images;
  for (const auto& p : points) {
    if (auto img = evaluate_p1(map, p.s, p.t)) images.emplace_back(p, *img);
  }
  if (images.empty()) throw WitnessSearchFailed("collapse_test: no rational point of " + curve.label + " with a defined image");
  bool constant = true;
  for (std::size_t k = 0; k < 2 && constant; ++k) {
    const RatFunc& comp = map.comp(k);
    const auto c = p1_component(images.front().second, k);
    const SparsePoly target = c ? comp.numerator() - comp.denominator() * *c : comp.denominator();
    constant = target.is_zero() || exact_divide(target, curve.poly).has_value();
  }
  if (constant) return Collapsed{images.front().second, "vanishing of the curve on numerator minus value times denominator"};
  for (std::size_t i = 1; i < images.size(); ++i) {
    if (images[i].second != images.front().second) {
      std::optional<std::size_t> k;
      if (images[i].second.x != images.front().second.x) k = 0;
      else k = 1;
      return NotCollapsed{k, std::nullopt, std::make_pair(images.front().first, images[i].first),
                          std::make_pair(images.front().second, images[i].second)};
    }
  }
  throw WitnessSearchFailed("collapse_test: no two rational points of " + curve.label + " with distinct images");
}

std::pair<RatFunc, RatFunc> exceptional_image(Exceptional e) {
  const PlaneMap m = lift_map(exceptional_chart(e), Chart::XY);
  const LinearParametrization param{0, SparsePoly(m.comp1.variables()), SparsePoly(m.comp1.variables(), Rational(1))};
  const Restriction r1 = restrict_component(m.comp1, param);
  const Restriction r2 = restrict_component(m.comp2, param);
  if (!r1.value || !r2.value) throw std::domain_error("exceptional_image: image leaves the XY chart");
  if (r1.is_constant() && r2.is_constant()) throw std::domain_error("exceptional_image: constant restriction");
  return {*r1.value, *r2.value};
}

OntoVerdict maps_onto_divisor(const CurveOnSurface& curve, Exceptional e) {
  if (curve.chart != Chart::XY) throw std::invalid_argument("maps_onto_divisor: curve must be given in XY");
  const PlaneMap m = lift_map(Chart::XY, exceptional_chart(e));
  OntoVerdict v;
  if (m.comp1.is_zero()) {
    v.reason = "exceptional coordinate vanishes identically";
    return v;
  }
  v.multiplicity = vanishing_order(m.comp1.numerator(), curve.poly);
  if (v.multiplicity == 0) {
    v.reason = "curve does not divide the numerator of the exceptional coordinate";
    return v;
  }
  if (exact_divide(m.comp2.denominator(), curve.poly)) {
    v.reason = "fiber coordinate is infinite along the curve";
    return v;
  }
  const CollapseVerdict c = collapse_test(curve, m);
  if (std::holds_alternative<Collapsed>(c)) {
    v.reason = "curve is collapsed";
    return v;
  }
  v.onto = true;
  v.reason = "divides the exceptional coordinate, not collapsed, target irreducible";
  return v;
}

// -------------------------------------------------------------- indeterminacy

namespace {

using C = std::complex<long double>;

std::vector<C> coefficients_at(const SparsePoly& p, C x0) {
  std::vector<C> out;
  for (const auto& c : p.coefficients_in(1)) {
    const std::array<C, 2> pt{x0, C(0)};
    out.push_back(c.evaluate_as<C>(std::span<const C>(pt)));
  }
  return out;
}

C eval_c(const SparsePoly& p, C x, C y) {
  const std::array<C, 2> pt{x, y};
  return p.evaluate_as<C>(std::span<const C>(pt));
}

long double scale_of(const SparsePoly& p, C x, C y) {
  long double s = 0;
  const long double ax = std::max<long double>(1, std::abs(x));
  const long double ay = std::max<long double>(1, std::abs(y));
  for (const auto& [m, c] : p.terms()) {
    s += std::fabs(to_long_double(c)) * std::pow(ax, m.exponent(0)) * std::pow(ay, m.exponent(1));
  }
  return std::max<long double>(s, 1);
}

void add_exact(IndeterminacyPoints& out, CurvePoint p) {
  if (std::find(out.exact.begin(), out.exact.end(), p) == out.exact.end()) out.exact.push_back(p);
}

void add_algebraic(IndeterminacyPoints& out, AlgebraicPoint p) {
  for (const auto& q : out.algebraic) {
    if (std::abs(q.x - p.x) < 1e-9L && std::abs(q.y - p.y) < 1e-9L) return;
  }
  out.algebraic.push_back(std::move(p));
}

void component_points(const SparsePoly& n_in, const SparsePoly& d_in, IndeterminacyPoints& out) {
  if (n_in.is_zero() || n_in.is_constant() || d_in.is_constant()) return;
  const SparsePoly& n = n_in;
  const SparsePoly& d = d_in;
  // Both univariate in x and coprime: no common zeros.
  if (!n.involves(1) && !d.involves(1)) return;
  const SparsePoly res = resultant(n, d, 1);
  if (res.is_zero()) throw std::domain_error("indeterminacy_points: components not reduced");
  if (res.is_constant()) return;
  const UPoly r = squarefree_part(UPoly::from_sparse(res, 0));
  UPoly rest = r;
  for (const Rational& x0 : rational_roots(r)) {
    rest = exact_divide(rest, UPoly({-x0, Rational(1)})).value();
    const SparsePoly ny = n.substitute(0, x0);
    const SparsePoly dy = d.substitute(0, x0);
    UPoly un = UPoly::from_sparse(ny, 1);
    UPoly ud = UPoly::from_sparse(dy, 1);
    if (un.is_zero() && ud.is_zero()) throw std::domain_error("indeterminacy_points: common factor");
    const UPoly g = gcd(un, ud);
    if (g.degree() < 1) continue;
    UPoly grest = g;
    for (const Rational& y0 : rational_roots(g)) {
      grest = exact_divide(grest, UPoly({-y0, Rational(1)})).value();
      add_exact(out, {x0, y0});
    }
    for (const C& y0 : numeric_roots(grest)) {
      AlgebraicPoint p;
      p.minimal_x = UPoly({-x0, Rational(1)});
      p.x_interval = {x0, x0};
      p.real = true;
      p.x = C(to_long_double(x0), 0);
      p.y = y0;
      p.residual = std::abs(grest.evaluate(y0)) / std::max<long double>(1, std::abs(to_long_double(grest.leading())));
      add_algebraic(out, p);
    }
  }
  if (rest.degree() < 1) return;
  const auto xs = numeric_roots(rest);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (std::abs(xs[i] - xs[j]) < 1e-10L * (1 + std::abs(xs[i]))) throw UnresolvedCluster("eliminant roots too close to separate");
    }
  }
  const auto intervals = isolate_real_roots(rest);
  for (const C& x0 : xs) {
    // Candidate y from whichever polynomial has the smaller degree in y at x0.
    const auto cn = coefficients_at(n, x0);
    const auto cd = coefficients_at(d, x0);
    const bool use_n = n.degree_in(1) > 0 && (d.degree_in(1) == 0 || n.degree_in(1) <= d.degree_in(1));
    const auto& base = use_n ? cn : cd;
    const SparsePoly& other = use_n ? d : n;
    const SparsePoly& self = use_n ? n : d;
    for (const C& y0 : numeric_roots(base)) {
      const long double r_other = std::abs(eval_c(other, x0, y0)) / scale_of(other, x0, y0);
      const long double r_self = std::abs(eval_c(self, x0, y0)) / scale_of(self, x0, y0);
      const long double residual = std::max(r_other, r_self);
      if (residual > 1e-12L) continue;
      AlgebraicPoint p;
      p.minimal_x = rest;
      p.x = x0;
      p.y = y0;
      p.residual = residual;
      p.real = std::fabs(x0.imag()) < 1e-12L * (1 + std::abs(x0));
      if (p.real) {
        for (const auto& iv : intervals) {
          if (to_long_double(iv.lo) <= x0.real() + 1e-12L && x0.real() <= to_long_double(iv.hi) + 1e-12L) {
            p.x_interval = refine(rest, iv, Rational(1, 1000000000));
            break;
          }
        }
      }
      add_algebraic(out, p);
    }
  }
}

}  // namespace

IndeterminacyPoints indeterminacy_points(const PlaneMap& map) {
  IndeterminacyPoints out;
  for (std::size_t k = 0; k < 2; ++k) component_points(map.comp(k).numerator(), map.comp(k).denominator(), out);
  std::vector<CurvePoint> verified;
  for (const auto& p : out.exact) {
    if (std::holds_alternative<Indeterminate>(evaluate(map, p.s, p.t))) verified.push_back(p);
  }
  out.exact = std::move(verified);
  std::sort(out.exact.begin(), out.exact.end(), [](const CurvePoint& a, const CurvePoint& b) {
    return a.s != b.s ? a.s < b.s : a.t < b.t;
  });
  return out;
}

namespace {

std::string complex_text(const std::complex<long double>& z) {
  std::ostringstream os;
  os.precision(12);
  os << static_cast<double>(z.real());
  if (std::fabs(z.imag()) > 1e-12L) os << (z.imag() < 0 ? "-" : "+") << static_cast<double>(std::fabs(z.imag())) << "i";
  return os.str();
}

}  // namespace

std::vector<LabeledPoint> heat_map_indeterminacy() {
  std::vector<LabeledPoint> out;
  for (Chart c : kBaseCharts) {
    const PlaneMap m = heat_map(c, Chart::XY);
    const auto vars = chart_variables(c);
    const bool need_s_zero = c == Chart::UY || c == Chart::UV;
    const bool need_t_zero = c == Chart::XV || c == Chart::UV;
    const auto pts = indeterminacy_points(m);
    for (const auto& p : pts.exact) {
      if ((need_s_zero && p.s != 0) || (need_t_zero && p.t != 0)) continue;
      out.push_back({chart_name(c), "(" + vars[0] + "," + vars[1] + ")=(" + to_string(p.s) + "," + to_string(p.t) + ")"});
    }
    for (const auto& p : pts.algebraic) {
      if ((need_s_zero && std::abs(p.x) > 1e-12L) || (need_t_zero && std::abs(p.y) > 1e-12L)) continue;
      out.push_back({chart_name(c), "(" + vars[0] + "," + vars[1] + ")~(" + complex_text(p.x) + "," + complex_text(p.y) +
                                        ") root of " + p.minimal_x.str(vars[0])});
    }
  }
  return out;
}

// ----------------------------------------------------------------- stability

namespace {

std::string verdict_text(const CollapseVerdict& v) {
  if (const auto* c = std::get_if<Collapsed>(&v)) return "collapsed to " + to_string(c->image);
  const auto& n = std::get<NotCollapsed>(v);
  if (n.restriction) return "component " + std::to_string(*n.varying_component + 1) + " restricts to " + n.restriction->str();
  return "witnesses (" + to_string(n.witness->first.s) + "," + to_string(n.witness->first.t) + ") -> " +
         to_string(n.witness_images->first) + " and (" + to_string(n.witness->second.s) + "," +
         to_string(n.witness->second.t) + ") -> " + to_string(n.witness_images->second);
}

void record(StabilityReport& r, std::string item, bool pass, std::string detail) {
  if (!pass && !r.failing_item) r.failing_item = item;
  r.items.push_back({std::move(item), pass, std::move(detail)});
}

void check_critical_list(StabilityReport& r) {
  using namespace curves;
  const std::vector<std::pair<std::string, SparsePoly>> cands{{"C1", C1()}, {"C2", C2()}, {"C3", C3()}, {"C4", C4()}, {"C5", C5()}};
  const CriticalFactors cf = jacobian_critical_factors(heat_map_xy(), cands, {D6(), D7(), C3(), C4()});
  const bool all = cf.factors.size() == cands.size();
  record(r, "critical set is C1..C5", all && cf.residual_explained,
         "factors found: " + std::to_string(cf.factors.size()) + ", residual " + cf.residual.str());
}

void check_lines_at_infinity(StabilityReport& r) {
  const PlaneMap m = heat_map(Chart::UV, Chart::UV);
  const std::vector<std::string> uv{"u", "v"};
  for (std::size_t k = 0; k < 2; ++k) {
    const CurveOnSurface line{k == 0 ? "{u=0}" : "{v=0}", Chart::UV, SparsePoly::variable(uv, k)};
    const CollapseVerdict v = collapse_test(line, m);
    record(r, "line at infinity " + line.label + " not collapsed", std::holds_alternative<NotCollapsed>(v), verdict_text(v));
  }
}

}  // namespace

StabilityReport stability_blown_up() {
  StabilityReport r;
  check_critical_list(r);
  using namespace curves;
  const std::vector<std::tuple<std::string, SparsePoly, Chart>> lifted{
      {"C1~", C1(), Chart::AM1}, {"C2~", C2(), Chart::AM1}, {"C3~", C3(), Chart::UM2},
      {"C4~", C4(), Chart::VM3}, {"C5~", C5(), Chart::XY}};
  for (const auto& [label, poly, target] : lifted) {
    const CollapseVerdict v = collapse_test({label, Chart::XY, poly}, lift_map(Chart::XY, target));
    record(r, label + " not collapsed", std::holds_alternative<NotCollapsed>(v), verdict_text(v));
  }
  for (Exceptional e : {Exceptional::E1, Exceptional::E2, Exceptional::E3}) {
    const CurveOnSurface curve = exceptional_curve(e);
    const CollapseVerdict v = collapse_test(curve, lift_map(curve.chart, Chart::XY));
    record(r, exceptional_name(e) + " not collapsed", std::holds_alternative<NotCollapsed>(v), verdict_text(v));
  }
  check_lines_at_infinity(r);
  r.stable = !r.failing_item.has_value();
  return r;
}

StabilityReport stability_base() {
  StabilityReport r;
  check_critical_list(r);
  const PlaneMap h = heat_map_xy();
  using namespace curves;
  const std::vector<std::pair<std::string, SparsePoly>> list{{"C1", C1()}, {"C2", C2()}, {"C3", C3()}, {"C4", C4()}, {"C5", C5()}};
  for (const auto& [label, poly] : list) {
    const CollapseVerdict v = collapse_test({label, Chart::XY, poly}, h);
    const auto* c = std::get_if<Collapsed>(&v);
    bool into_indeterminacy = false;
    if (c && c->image.x && c->image.y) into_indeterminacy = indeterminate_in_all_charts(h, *c->image.x, *c->image.y);
    record(r, label + " not collapsed into I(H)", !into_indeterminacy,
           verdict_text(v) + (into_indeterminacy ? ", an indeterminacy point" : ""));
  }
  check_lines_at_infinity(r);
  r.stable = !r.failing_item.has_value();
  return r;
}

StabilityReport stability_identity() {
  StabilityReport r;
  const SparsePoly j = jacobian_numerator(identity_map(Chart::XY));
  record(r, "Jacobian constant", j.is_constant() && !j.is_zero(), "numerator " + j.str());
  r.stable = !r.failing_item.has_value();
  return r;
}

}  // namespace phm
