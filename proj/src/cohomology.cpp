#include "phm/cohomology.hpp"

#include <sstream>

namespace phm {

std::string DivisorClass::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < 5; ++i) os << (i ? ", " : "") << c[i];
  os << ")";
  return os.str();
}

std::string basis_name(Basis b) {
  switch (b) {
    case Basis::Lx: return "pi*Lx";
    case Basis::Ly: return "pi*Ly";
    case Basis::E1: return "E1";
    case Basis::E2: return "E2";
    case Basis::E3: return "E3";
  }
  throw std::invalid_argument("unknown basis element");
}

DivisorClass basis_vector(Basis b) {
  DivisorClass v;
  v[static_cast<std::size_t>(b)] = 1;
  return v;
}

DivisorClass anticanonical() { return DivisorClass{{2, 2, -1, -1, -1}}; }

long intersect(const DivisorClass& a, const DivisorClass& b) {
  return a[0] * b[1] + a[1] * b[0] - a[2] * b[2] - a[3] * b[3] - a[4] * b[4];
}

DivisorClass class_in_base(const SparsePoly& p) {
  const Bidegree d = bidegree(p);
  return DivisorClass{{static_cast<long>(d.dx), static_cast<long>(d.dy), 0, 0, 0}};
}

namespace {

std::array<bool, 2> inverted(Chart c) {
  switch (c) {
    case Chart::XY: return {false, false};
    case Chart::UY: return {true, false};
    case Chart::XV: return {false, true};
    case Chart::UV: return {true, true};
    default: break;
  }
  throw std::invalid_argument("not a base chart: " + chart_name(c));
}

}  // namespace

SparsePoly rechart(const SparsePoly& p, Chart from, Chart to) {
  const auto a = inverted(from);
  const auto b = inverted(to);
  const std::array<unsigned, 2> deg{p.degree_in(0), p.degree_in(1)};
  SparsePoly out(chart_variables(to));
  for (const auto& [m, c] : p.terms()) {
    std::array<unsigned, 2> e{m.exponent(0), m.exponent(1)};
    for (std::size_t v = 0; v < 2; ++v) {
      if (a[v] != b[v]) e[v] = deg[v] - e[v];
    }
    out.add_term(Monomial::from_exponents(e), c);
  }
  return out;
}

std::array<BlowupCenter, 3> blowup_centers() {
  return {BlowupCenter{Exceptional::E1, Chart::XY, {Rational(1), Rational(1)}},
          BlowupCenter{Exceptional::E2, Chart::UY, {Rational(0), Rational(0)}},
          BlowupCenter{Exceptional::E3, Chart::XV, {Rational(0), Rational(0)}}};
}

std::array<unsigned, 3> center_multiplicities(const CurveOnSurface& curve) {
  std::array<unsigned, 3> out{};
  const auto centers = blowup_centers();
  for (std::size_t i = 0; i < 3; ++i) {
    const SparsePoly q = rechart(curve.poly, curve.chart, centers[i].chart);
    out[i] = multiplicity_at_point(q, centers[i].point);
  }
  return out;
}

DivisorClass proper_transform_class(const CurveOnSurface& curve) {
  const Bidegree d = bidegree(curve.poly);
  DivisorClass c{{static_cast<long>(d.dx), static_cast<long>(d.dy), 0, 0, 0}};
  const auto m = center_multiplicities(curve);
  for (std::size_t i = 0; i < 3; ++i) c[2 + i] = -static_cast<long>(m[i]);
  return c;
}

DivisorClass proper_transform_class(const SparsePoly& curve_xy) {
  return proper_transform_class(CurveOnSurface{"", Chart::XY, curve_xy});
}

std::string PullbackComputation::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    os << (first ? "" : " + ");
    if (t.coefficient != 1) os << t.coefficient << "*";
    os << "[" << t.label << "]";
    first = false;
  }
  if (first) os << "0";
  os << " = " << cls.str();
  return os.str();
}

std::string target_divisor_name(TargetDivisor d) {
  switch (d) {
    case TargetDivisor::E1: return "E1";
    case TargetDivisor::E2: return "E2";
    case TargetDivisor::E3: return "E3";
    case TargetDivisor::LxTilde: return "Lx~";
    case TargetDivisor::LyTilde: return "Ly~";
  }
  throw std::invalid_argument("unknown target divisor");
}

namespace {

// Target chart and the component whose zero set in that chart is D.
std::pair<Chart, std::size_t> target_coordinate(TargetDivisor d) {
  switch (d) {
    case TargetDivisor::E1: return {Chart::AM1, 0};
    case TargetDivisor::E2: return {Chart::UM2, 0};
    case TargetDivisor::E3: return {Chart::VM3, 0};
    case TargetDivisor::LxTilde: return {Chart::XY, 0};
    case TargetDivisor::LyTilde: return {Chart::XY, 1};
  }
  throw std::invalid_argument("unknown target divisor");
}

struct SourceCurve {
  std::string label;
  SparsePoly poly;
  DivisorClass cls;
};

std::vector<SourceCurve> xy_catalogue() {
  using namespace curves;
  const std::vector<std::pair<std::string, SparsePoly>> named{
      {"C1~", C1()}, {"C2~", C2()}, {"C3~", C3()}, {"C4~", C4()}, {"C5~", C5()}, {"C6~", C6()},
      {"C7~", C7()}, {"D6~", D6()}, {"D7~", D7()}, {"K1~", K1()}, {"K2~", K2()},
      {"{x=0}~", SparsePoly::parse("x", {"x", "y"})}, {"{y=0}~", SparsePoly::parse("y", {"x", "y"})}};
  std::vector<SourceCurve> out;
  for (const auto& [label, p] : named) out.push_back({label, p, proper_transform_class(p)});
  return out;
}

// Source charts other than XY contribute only the curve cut out by one
// coordinate there: lines at infinity and exceptional divisors.
struct ChartCurve {
  Chart chart;
  std::size_t var;
  std::string label;
  DivisorClass cls;
};

std::vector<ChartCurve> chart_curves() {
  const auto line = [](Chart c, std::size_t var) {
    return proper_transform_class(CurveOnSurface{"", c, SparsePoly::variable(chart_variables(c), var)});
  };
  return {{Chart::UY, 0, "{x=inf}~", line(Chart::UY, 0)},
          {Chart::XV, 1, "{y=inf}~", line(Chart::XV, 1)},
          {Chart::AM1, 0, "E1", basis_vector(Basis::E1)},
          {Chart::UM2, 0, "E2", basis_vector(Basis::E2)},
          {Chart::VM3, 0, "E3", basis_vector(Basis::E3)}};
}

void add_term(PullbackComputation& out, const std::string& label, unsigned k, const DivisorClass& cls) {
  out.terms.push_back({label, k, cls});
  out.cls = out.cls + static_cast<long>(k) * cls;
}

}  // namespace

PullbackComputation pullback_target_divisor(TargetDivisor d) {
  const auto [target, index] = target_coordinate(d);
  PullbackComputation out;

  const PlaneMap h = heat_map(Chart::XY, target);
  const RatFunc& coord = h.comp(index);
  const RatFunc& other = h.comp(1 - index);
  if (coord.is_zero()) throw std::domain_error("pullback: coordinate vanishes identically");
  const auto catalogue = xy_catalogue();
  std::vector<SparsePoly> polys;
  for (const auto& c : catalogue) polys.push_back(c.poly);
  const TrialDivision td = trial_divide(coord.numerator(), polys);
  if (!td.residual.is_constant()) {
    throw UnexplainedComponent("pullback of " + target_divisor_name(d) + ": residual factor " + td.residual.str());
  }
  for (std::size_t i = 0; i < catalogue.size(); ++i) {
    if (td.exponents[i] == 0) continue;
    if (exact_divide(other.denominator(), catalogue[i].poly)) {
      out.excluded.push_back({catalogue[i].label, "other coordinate is infinite along it, image leaves " +
                                                      target_divisor_name(d)});
      continue;
    }
    add_term(out, catalogue[i].label, td.exponents[i], catalogue[i].cls);
  }

  for (const auto& cc : chart_curves()) {
    const PlaneMap g = heat_map(cc.chart, target);
    const RatFunc& gc = g.comp(index);
    const SparsePoly var = SparsePoly::variable(chart_variables(cc.chart), cc.var);
    const unsigned k = vanishing_order(gc.numerator(), var);
    if (k == 0) continue;
    if (exact_divide(g.comp(1 - index).denominator(), var)) {
      out.excluded.push_back({cc.label, "other coordinate is infinite along it, image leaves " +
                                            target_divisor_name(d)});
      continue;
    }
    add_term(out, cc.label, k, cc.cls);
  }
  return out;
}

PullbackComputation pullback_basis_class(Basis b) {
  switch (b) {
    case Basis::E1: return pullback_target_divisor(TargetDivisor::E1);
    case Basis::E2: return pullback_target_divisor(TargetDivisor::E2);
    case Basis::E3: return pullback_target_divisor(TargetDivisor::E3);
    case Basis::Lx:
    case Basis::Ly: break;
  }
  // Total transform of the coordinate line through 0: proper transform plus
  // the exceptional divisors over the centers it passes through.
  const bool is_x = b == Basis::Lx;
  const SparsePoly line = SparsePoly::parse(is_x ? "x" : "y", {"x", "y"});
  const auto mult = center_multiplicities(CurveOnSurface{"", Chart::XY, line});
  PullbackComputation out = pullback_target_divisor(is_x ? TargetDivisor::LxTilde : TargetDivisor::LyTilde);
  const std::array<TargetDivisor, 3> es{TargetDivisor::E1, TargetDivisor::E2, TargetDivisor::E3};
  for (std::size_t i = 0; i < 3; ++i) {
    if (mult[i] == 0) continue;
    const PullbackComputation e = pullback_target_divisor(es[i]);
    for (const auto& t : e.terms) add_term(out, t.label, mult[i] * t.coefficient, t.cls);
    out.excluded.insert(out.excluded.end(), e.excluded.begin(), e.excluded.end());
  }
  return out;
}

IntMatrix pullback_matrix() {
  IntMatrix m{};
  for (std::size_t j = 0; j < 5; ++j) {
    const DivisorClass col = pullback_basis_class(kBasis[j]).cls;
    for (std::size_t i = 0; i < 5; ++i) m[i][j] = col[i];
  }
  return m;
}

IntMatrix reference_pullback_matrix() {
  return {{{3, 4, 2, 2, 2}, {4, 3, 2, 2, 2}, {-2, -2, -2, -1, -1}, {-2, -2, -1, -2, -1}, {-2, -2, -1, -1, -2}}};
}

DivisorClass apply_matrix(const IntMatrix& m, const DivisorClass& v) {
  DivisorClass out;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) out[i] += m[i][j] * v[j];
  }
  return out;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out{};
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t k = 0; k < 5; ++k) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

IntMatrix transpose(const IntMatrix& m) {
  IntMatrix out{};
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) out[j][i] = m[i][j];
  }
  return out;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < 5; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < 5; ++j) os << (j ? " " : "") << m[i][j];
  }
  os << "]";
  return os.str();
}

NonFunctoriality non_functoriality_witness() {
  const PlaneMap h = heat_map_xy();
  NonFunctoriality w{};
  // Zero divisor of y' on P1 x P1.
  Bidegree d{};
  for (const auto& [f, e] : h.comp2.num_factors()) {
    const Bidegree fd = bidegree(f);
    d = d + Bidegree{fd.dx * e, fd.dy * e};
  }
  w.base = {static_cast<long>(d.dx), static_cast<long>(d.dy)};
  w.pulled_back_base = DivisorClass{{w.base[0], w.base[1], 0, 0, 0}};
  w.lifted = pullback_basis_class(Basis::Ly).cls;
  return w;
}

std::vector<MultiplicityRow> multiplicity_table() {
  using namespace curves;
  std::vector<MultiplicityRow> out;
  for (const auto& [label, p] : std::vector<std::pair<std::string, SparsePoly>>{
           {"C2", C2()}, {"C3", C3()}, {"C4", C4()}, {"C6", C6()}, {"C7", C7()}}) {
    out.push_back({label, center_multiplicities(CurveOnSurface{label, Chart::XY, p})});
  }
  return out;
}

std::vector<std::pair<std::string, DivisorClass>> class_equations() {
  using namespace curves;
  std::vector<std::pair<std::string, DivisorClass>> out;
  for (const auto& [label, p] : std::vector<std::pair<std::string, SparsePoly>>{
           {"C1~", C1()}, {"C2~", C2()}, {"C3~", C3()}, {"C4~", C4()}, {"C6~", C6()}, {"C7~", C7()}}) {
    out.emplace_back(label, proper_transform_class(p));
  }
  return out;
}

}  // namespace phm
