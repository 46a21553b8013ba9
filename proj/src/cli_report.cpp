#include "phm/cli_report.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "phm/blowup_surface.hpp"
#include "phm/cohomology.hpp"
#include "phm/degrees.hpp"

namespace phm {

using nlohmann::json;

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Assumed: return "assumed";
  }
  return "?";
}

const CheckRecord* Certificate::find(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

json Certificate::to_json(bool include_timing) const {
  json j;
  j["version"] = version;
  j["overall"] = pass ? "pass" : "fail";
  j["failed_check"] = failed_check ? json(*failed_check) : json(nullptr);
  j["lambda1"] = lambda1 ? json(*lambda1) : json(nullptr);
  j["lambda2"] = lambda2 ? json(*lambda2) : json(nullptr);
  j["lambda2_status"] = lambda2_assumed ? "assumed" : (lambda2 ? "verified" : "unknown");
  j["assumptions"] = assumptions;
  j["seeds"] = seeds;
  json arr = json::array();
  for (const auto& c : checks) {
    json r;
    r["id"] = c.id;
    r["anchor"] = c.anchor;
    r["status"] = status_name(c.status);
    r["payload"] = c.payload;
    if (!c.failure.empty()) r["failure"] = c.failure;
    arr.push_back(std::move(r));
  }
  j["checks"] = std::move(arr);
  if (include_timing) {
    json t;
    for (const auto& c : checks) t[c.id] = c.seconds;
    t["total"] = total_seconds;
    j["timing_seconds"] = std::move(t);
  }
  return j;
}

std::string Certificate::dump(bool include_timing) const { return to_json(include_timing).dump(2) + "\n"; }

namespace {

struct CheckDef {
  std::string id;
  std::string anchor;
};

const std::vector<CheckDef>& definitions() {
  static const std::vector<CheckDef> defs{
      {"reflection_symmetry", "H commutes with the reflection R(x,y) = (y,x)"},
      {"critical_factors", "the critical set of H consists of the five irreducible curves C1..C5"},
      {"collapse_lemma", "H collapses C1, C2 to (1,1), C3 to p2, C4 to p3 and does not collapse C5"},
      {"lifted_non_collapse", "the lift to the blown-up surface collapses no curve"},
      {"stability", "the lift is algebraically stable; H on P1 x P1 is not"},
      {"multiplicity_table", "multiplicities of C2, C3, C4, C6, C7 at p1, p2, p3"},
      {"class_equations", "classes of the proper transforms of C1..C4, C6, C7"},
      {"pullback_matrix", "matrix of the pullback on H^{1,1} in the basis (pi*Lx, pi*Ly, E1, E2, E3)"},
      {"char_poly", "characteristic polynomial (t - 4)(t + 1)^4"},
      {"spectral_radius", "first dynamical degree lambda_1(H) = 4"},
      {"anticanonical_eigenvector", "the anticanonical class is the eigenvector for 4"},
      {"non_functoriality", "pi*(H*[Ly]) differs from the lifted pullback of pi*[Ly]"},
      {"topdeg", "topological degree lambda_2(H) = 6 by preimage counting"},
      {"divisibility", "lambda_1 does not divide lambda_2, so H preserves no fibration"},
      {"degree_growth", "degrees of iterates follow the powers of the pullback matrix"},
  };
  return defs;
}

std::string str(const Rational& r) { return to_string(r); }

std::string sci(long double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3Le", v);
  return buf;
}

json class_json(const DivisorClass& c) { return json(std::vector<long>(c.c.begin(), c.c.end())); }

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (const auto& r : m) rows.push_back(std::vector<long>(r.begin(), r.end()));
  return rows;
}

std::string verdict_text(const CollapseVerdict& v) {
  if (const auto* c = std::get_if<Collapsed>(&v)) return "collapsed to " + to_string(c->image);
  const auto& n = std::get<NotCollapsed>(v);
  if (n.restriction) return "component " + std::to_string(*n.varying_component + 1) + " restricts to " + n.restriction->str();
  if (n.witness && n.witness_images) {
    const auto& [p, q] = *n.witness;
    return "(" + str(p.s) + "," + str(p.t) + ") -> " + to_string(n.witness_images->first) + ", (" + str(q.s) + "," +
           str(q.t) + ") -> " + to_string(n.witness_images->second);
  }
  return "not collapsed";
}

RatFunc parse_ratfunc(const std::string& num, const std::string& den, const std::vector<std::string>& vars) {
  return RatFunc::from_polys(SparsePoly::parse(num, vars), SparsePoly::parse(den, vars));
}

// Result of a single check; failure text empty on success.
struct Outcome {
  json payload = json::object();
  std::string failure;
  void require(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

struct Context {
  const VerifyOptions& opts;
  std::optional<IntMatrix> matrix;
  std::optional<long> lambda1;
  std::optional<long> lambda2;
};

Outcome check_reflection(Context&) {
  Outcome o;
  const bool ok = check_reflection_symmetry(heat_map_xy());
  o.payload["R o H == H o R"] = ok;
  o.require(ok, "R o H != H o R");
  return o;
}

Outcome check_critical(Context&) {
  Outcome o;
  using namespace curves;
  const std::vector<std::pair<std::string, SparsePoly>> cands{
      {"C1", C1()}, {"C2", C2()}, {"C3", C3()}, {"C4", C4()}, {"C5", C5()}};
  const CriticalFactors cf = jacobian_critical_factors(heat_map_xy(), cands, {D6(), D7(), C3(), C4()});
  json f = json::object();
  for (const auto& c : cf.factors) f[c.label] = {{"poly", c.factor.str()}, {"exponent", c.exponent}};
  o.payload["factors"] = f;
  o.payload["residual"] = cf.residual.str();
  o.payload["residual_explained"] = cf.residual_explained;
  o.require(cf.factors.size() == cands.size(), "not every curve C1..C5 divides the Jacobian");
  o.require(cf.residual_explained, "Jacobian has an unexplained factor: " + cf.residual.str());
  return o;
}

Outcome check_collapse(Context&) {
  Outcome o;
  using namespace curves;
  const PlaneMap h = heat_map_xy();
  const Rational one(1), zero(0);
  const std::vector<std::tuple<std::string, SparsePoly, std::optional<P1Point>>> cases{
      {"C1", C1(), P1Point{one, one}},
      {"C2", C2(), P1Point{one, one}},
      {"C3", C3(), P1Point{std::nullopt, zero}},
      {"C4", C4(), P1Point{zero, std::nullopt}},
      {"C5", C5(), std::nullopt},
  };
  for (const auto& [label, poly, expected] : cases) {
    const CollapseVerdict v = collapse_test({label, Chart::XY, poly}, h);
    o.payload[label] = verdict_text(v);
    const auto* c = std::get_if<Collapsed>(&v);
    if (expected) {
      o.require(c && c->image == *expected, label + " is not collapsed to " + to_string(*expected));
    } else {
      o.require(c == nullptr, label + " is collapsed");
    }
  }
  // The two witnesses for C5.
  const SparsePoly c5 = C5();
  json w = json::array();
  const std::array<std::pair<std::array<Rational, 2>, P1Point>, 2> witnesses{{
      {{Rational(0), Rational(0)}, P1Point{Rational(3, 5), Rational(3, 5)}},
      {{Rational(0), Rational(1)}, P1Point{Rational(3, 5), Rational(5, 8)}},
  }};
  for (const auto& [pt, image] : witnesses) {
    const auto got = evaluate_p1(h, pt[0], pt[1]);
    const std::string where = "(" + str(pt[0]) + "," + str(pt[1]) + ")";
    o.require(c5.evaluate(pt) == 0, where + " is not on C5");
    o.require(got && *got == image, "H" + where + " != " + to_string(image));
    w.push_back(where + " -> " + (got ? to_string(*got) : std::string("indeterminate")));
  }
  o.payload["C5 witnesses"] = w;
  return o;
}

Outcome check_lifted(Context&) {
  Outcome o;
  using namespace curves;
  const std::array<Exceptional, 3> es{Exceptional::E1, Exceptional::E2, Exceptional::E3};
  const std::vector<std::pair<std::string, SparsePoly>> crit{{"C1", C1()}, {"C2", C2()}, {"C3", C3()}, {"C4", C4()}};
  const std::map<std::string, Exceptional> expected_onto{
      {"C1", Exceptional::E1}, {"C2", Exceptional::E1}, {"C3", Exceptional::E2}, {"C4", Exceptional::E3}};
  json onto = json::object();
  for (const auto& [label, poly] : crit) {
    for (Exceptional e : es) {
      const OntoVerdict v = maps_onto_divisor({label, Chart::XY, poly}, e);
      const bool want = expected_onto.at(label) == e;
      if (v.onto) onto[label + "~"] = exceptional_name(e);
      o.require(v.onto == want, label + "~ onto " + exceptional_name(e) + ": " + v.reason);
    }
  }
  o.payload["onto"] = onto;

  // m1' along C1~ and C2~.
  const PlaneMap to_e1 = lift_map(Chart::XY, Chart::AM1);
  const std::vector<std::tuple<std::string, SparsePoly, std::string, std::string>> m1{
      {"C1", C1(), "x^2 + 2*x", "2*x + 1"},
      {"C2", C2(), "9*x^2 + 9*x + 9", "(x^2 + x + 7)*(2*x + 1)"},
  };
  for (const auto& [label, poly, num, den] : m1) {
    const CollapseVerdict v = collapse_test({label + "~", Chart::XY, poly}, to_e1);
    const auto* n = std::get_if<NotCollapsed>(&v);
    const bool ok = n && n->restriction && n->restriction->value && *n->varying_component == 1 &&
                    n->restriction->value->same_function(parse_ratfunc(num, den, n->restriction->value->variables()));
    o.payload["m1' on " + label + "~"] = verdict_text(v);
    o.require(ok, "m1' along " + label + "~ differs from (" + num + ")/(" + den + ")");
  }

  // C3~ and C4~ by two witnesses with distinct images on E2, E3.
  const std::vector<std::tuple<std::string, Chart, std::array<Rational, 2>, std::array<Rational, 2>>> pts{
      {"C3", Chart::UM2, {Rational(0), Rational(6)}, {Rational(1), Rational(6)}},
      {"C4", Chart::VM3, {Rational(6), Rational(0)}, {Rational(6), Rational(1)}},
  };
  for (const auto& [label, chart, p, q] : pts) {
    const PlaneMap f = lift_map(Chart::XY, chart);
    const SparsePoly c = label == "C3" ? C3() : C4();
    const auto a = evaluate_p1(f, p[0], p[1]);
    const auto b = evaluate_p1(f, q[0], q[1]);
    o.require(c.evaluate(p) == 0 && c.evaluate(q) == 0, "witness not on " + label);
    o.require(a && b && a->x == Rational(0) && b->x == Rational(0) && !(*a == *b),
              label + "~ witnesses do not land at distinct points of the exceptional divisor");
    o.payload[label + "~ witnesses"] = {"(" + str(p[0]) + "," + str(p[1]) + ") -> " + (a ? to_string(*a) : "?"),
                                        "(" + str(q[0]) + "," + str(q[1]) + ") -> " + (b ? to_string(*b) : "?")};
  }

  // Images of the exceptional divisors.
  for (Exceptional e : es) {
    const auto [x, y] = exceptional_image(e);
    o.payload[exceptional_name(e) + " image"] = {x.str(), y.str()};
    if (e == Exceptional::E1) {
      const auto& vars = x.variables();
      const std::string t = vars[1];
      auto lin = [&](int a, int b) { return "(" + std::to_string(a) + "*" + t + " + " + std::to_string(b) + ")"; };
      const RatFunc wx = parse_ratfunc(lin(4, 3) + "*" + lin(4, 5), lin(5, 6) + "*" + lin(5, 4), vars);
      const RatFunc wy = parse_ratfunc(lin(3, 4) + "*" + lin(5, 4), lin(6, 5) + "*" + lin(4, 5), vars);
      o.require(x.same_function(wx) && y.same_function(wy), "E1 image differs from the reference formula");
      continue;
    }
    const RatFunc& moving = e == Exceptional::E2 ? x : y;
    const RatFunc& fixed = e == Exceptional::E2 ? y : x;
    const auto& vars = moving.variables();
    const std::string t = vars[1];
    const RatFunc want = parse_ratfunc("3 - 2*" + t, t + "^2 - 6*" + t + " + 6", vars);
    o.require(fixed.is_zero() && moving.same_function(want),
              exceptional_name(e) + " image differs from (3 - 2t)/(t^2 - 6t + 6) on a coordinate axis");
  }
  return o;
}

json stability_json(const StabilityReport& r) {
  json items = json::array();
  for (const auto& it : r.items) items.push_back({{"item", it.item}, {"pass", it.pass}, {"detail", it.detail}});
  return {{"stable", r.stable}, {"items", items}, {"failing_item", r.failing_item ? json(*r.failing_item) : json(nullptr)}};
}

Outcome check_stability(Context&) {
  Outcome o;
  json ind = json::array();
  for (const auto& p : heat_map_indeterminacy()) ind.push_back(p.chart + " " + p.coords);
  o.payload["indeterminacy"] = ind;
  const StabilityReport lifted = stability_blown_up();
  const StabilityReport base = stability_base();
  o.payload["blown_up"] = stability_json(lifted);
  o.payload["base"] = stability_json(base);
  o.require(lifted.stable, "lift not stable at " + lifted.failing_item.value_or("?"));
  o.require(!base.stable, "H on P1 x P1 reported stable");
  return o;
}

Outcome check_multiplicities(Context&) {
  Outcome o;
  const std::map<std::string, std::array<unsigned, 3>> expected{
      {"C2", {1, 0, 0}}, {"C3", {1, 2, 1}}, {"C4", {1, 1, 2}}, {"C6", {1, 1, 1}}, {"C7", {1, 1, 1}}};
  const auto table = multiplicity_table();
  o.require(table.size() == expected.size(), "table has the wrong number of rows");
  for (const auto& row : table) {
    o.payload[row.label] = row.mult;
    const auto it = expected.find(row.label);
    o.require(it != expected.end() && it->second == row.mult, "multiplicities of " + row.label);
  }
  return o;
}

Outcome check_classes(Context&) {
  Outcome o;
  const std::map<std::string, DivisorClass> expected{
      {"C1~", {{1, 1, -1, -1, -1}}}, {"C2~", {{1, 1, -1, 0, 0}}},   {"C3~", {{2, 2, -1, -2, -1}}},
      {"C4~", {{2, 2, -1, -1, -2}}}, {"C6~", {{1, 2, -1, -1, -1}}}, {"C7~", {{2, 1, -1, -1, -1}}}};
  const auto eqs = class_equations();
  o.require(eqs.size() == expected.size(), "wrong number of class equations");
  for (const auto& [label, cls] : eqs) {
    o.payload[label] = class_json(cls);
    const auto it = expected.find(label);
    o.require(it != expected.end() && it->second == cls, "class of " + label + " is " + cls.str());
  }
  return o;
}

Outcome check_pullback(Context& ctx) {
  Outcome o;
  IntMatrix m = pullback_matrix();
  if (const auto& p = ctx.opts.perturb_matrix) m.at(p->row).at(p->col) += p->delta;
  ctx.matrix = m;
  json cols = json::object();
  for (Basis b : kBasis) cols[basis_name(b)] = pullback_basis_class(b).str();
  o.payload["columns"] = cols;
  o.payload["matrix"] = matrix_json(m);
  const IntMatrix ref = reference_pullback_matrix();
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      o.require(m[i][j] == ref[i][j], "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is " +
                                          std::to_string(m[i][j]) + ", expected " + std::to_string(ref[i][j]));
    }
  }
  return o;
}

const IntMatrix& matrix_of(Context& ctx) {
  if (!ctx.matrix) ctx.matrix = reference_pullback_matrix();
  return *ctx.matrix;
}

Outcome check_char_poly(Context& ctx) {
  Outcome o;
  const IntMatrix& m = matrix_of(ctx);
  const IntPolynomial p = char_poly(m);
  // (t - 4)(t + 1)^4
  const IntPolynomial want{{Integer(-4), Integer(-15), Integer(-20), Integer(-10), Integer(0), Integer(1)}};
  o.payload["polynomial"] = p.str();
  o.require(p == want, "characteristic polynomial is " + p.str());
  const IntegerMatrix zero = evaluate_at_matrix(p, to_integer_matrix(m));
  bool ch = true;
  for (const auto& row : zero) {
    for (const auto& v : row) ch = ch && v == 0;
  }
  o.payload["cayley_hamilton"] = ch;
  o.require(ch, "p(M) != 0");
  const bool tr = char_poly(transpose(m)) == p;
  o.payload["transpose_invariant"] = tr;
  o.require(tr, "char poly of the transpose differs");
  return o;
}

Outcome check_spectral(Context& ctx) {
  Outcome o;
  const SpectralRadius r = spectral_radius_exact(char_poly(matrix_of(ctx)));
  o.payload["interval"] = {str(r.lo), str(r.hi)};
  o.payload["exact"] = r.exact ? json(str(*r.exact)) : json(nullptr);
  o.require(r.exact && *r.exact == 4, "spectral radius is not certified to be 4");
  if (r.exact && is_integer(*r.exact)) ctx.lambda1 = r.exact->get_num().get_si();
  return o;
}

Outcome check_anticanonical(Context& ctx) {
  Outcome o;
  const DivisorClass k = anticanonical();
  const DivisorClass mk = apply_matrix(matrix_of(ctx), k);
  o.payload["-K"] = class_json(k);
  o.payload["M(-K)"] = class_json(mk);
  o.require(anticanonical_eigencheck(matrix_of(ctx)) && mk == 4 * k, "M(-K) != 4(-K)");
  return o;
}

Outcome check_non_functoriality(Context&) {
  Outcome o;
  const NonFunctoriality w = non_functoriality_witness();
  o.payload["H*[Ly] on P1 x P1"] = w.base;
  o.payload["pi*(H*[Ly])"] = class_json(w.pulled_back_base);
  o.payload["lifted pullback of pi*[Ly]"] = class_json(w.lifted);
  o.require(w.differ(), "the two classes agree");
  return o;
}

Outcome check_topdeg(Context& ctx) {
  Outcome o;
  const TopologicalDegree td = topological_degree(ctx.opts.samples, ctx.opts.seed);
  json samples = json::array();
  long double worst = 0;
  for (const auto& s : td.samples) {
    samples.push_back({{"target", {str(s.c1), str(s.c2)}},
                       {"eliminant_degree", s.eliminant_degree},
                       {"stripped_degree", s.stripped_degree},
                       {"preimages", s.preimages.size()},
                       {"max_residual", sci(s.max_residual)}});
    worst = std::max(worst, s.max_residual);
  }
  o.payload["samples"] = samples;
  o.payload["degenerate"] = td.degenerate_log;
  o.payload["degree"] = td.degree ? json(*td.degree) : json(nullptr);
  o.require(td.samples.size() >= ctx.opts.samples, "not enough generic samples");
  o.require(td.degree && *td.degree == 6, "preimage count is not 6 on every sample");
  o.require(worst < 1e-8L, "residual " + sci(worst) + " exceeds 1e-8");
  if (td.degree) ctx.lambda2 = *td.degree;
  return o;
}

Outcome check_divisibility(Context& ctx) {
  Outcome o;
  const long l1 = ctx.lambda1.value_or(4);
  const long l2 = ctx.lambda2.value_or(6);
  const bool divides = fibration_divisibility(l1, l2);
  o.payload["lambda1"] = l1;
  o.payload["lambda2"] = l2;
  o.payload["lambda1 divides lambda2"] = divides;
  o.payload["invariant fibration"] = divides ? "not excluded" : "none";
  o.require(!divides, std::to_string(l1) + " divides " + std::to_string(l2));
  return o;
}

Outcome check_growth(Context& ctx) {
  Outcome o;
  const std::array<Bidegree, 3> frozen{{{3, 4}, {13, 12}, {51, 52}}};
  const auto rows = degree_growth(ctx.opts.growth_n, matrix_of(ctx));
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n},
                   {"symbolic", {r.symbolic.dx, r.symbolic.dy}},
                   {"predicted", {r.predicted.dx, r.predicted.dy}}});
    const std::string n = std::to_string(r.n);
    o.require(r.symbolic == r.predicted, "iterate " + n + " has bidegree different from the matrix prediction");
    o.require(r.n > frozen.size() || r.predicted == frozen[r.n - 1], "prediction for n = " + n + " differs from the recorded table");
  }
  o.payload["rows"] = arr;
  return o;
}

using CheckFn = std::function<Outcome(Context&)>;

const std::map<std::string, CheckFn>& functions() {
  static const std::map<std::string, CheckFn> fns{
      {"reflection_symmetry", check_reflection},
      {"critical_factors", check_critical},
      {"collapse_lemma", check_collapse},
      {"lifted_non_collapse", check_lifted},
      {"stability", check_stability},
      {"multiplicity_table", check_multiplicities},
      {"class_equations", check_classes},
      {"pullback_matrix", check_pullback},
      {"char_poly", check_char_poly},
      {"spectral_radius", check_spectral},
      {"anticanonical_eigenvector", check_anticanonical},
      {"non_functoriality", check_non_functoriality},
      {"topdeg", check_topdeg},
      {"divisibility", check_divisibility},
      {"degree_growth", check_growth},
  };
  return fns;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& d : definitions()) v.push_back(d.id);
    return v;
  }();
  return ids;
}

Certificate verify(const VerifyOptions& opts) {
  for (const auto& s : opts.skip) {
    if (!functions().count(s)) throw std::invalid_argument("unknown check id: " + s);
  }
  if (opts.growth_n < 1 || opts.growth_n > 4) throw std::invalid_argument("growth depth must be in 1..4");

  Certificate cert;
  cert.seeds["topdeg"] = opts.seed;
  cert.assumptions = {
      "C1..C5, C6, C7 are irreducible over the complex numbers",
      "only the critical curves, the exceptional divisors and the lines at infinity can be collapsed",
      "the preimage count at sampled generic targets corroborates lambda_2 = 6; it is not a proof",
  };
  Context ctx{opts, std::nullopt, std::nullopt, std::nullopt};
  const auto start = std::chrono::steady_clock::now();

  for (const auto& def : definitions()) {
    CheckRecord rec;
    rec.id = def.id;
    rec.anchor = def.anchor;
    if (opts.skip.count(def.id)) {
      rec.status = CheckStatus::Assumed;
      if (opts.progress) *opts.progress << "[assumed] " << def.id << "\n";
      cert.checks.push_back(std::move(rec));
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = functions().at(def.id)(ctx);
    } catch (const std::exception& e) {
      out.failure = std::string("exception: ") + e.what();
    }
    rec.seconds = seconds_since(t0);
    rec.payload = std::move(out.payload);
    rec.status = out.failure.empty() ? CheckStatus::Pass : CheckStatus::Fail;
    rec.failure = out.failure;
    if (opts.progress) {
      *opts.progress << "[" << status_name(rec.status) << "] " << def.id;
      if (!rec.failure.empty()) *opts.progress << ": " << rec.failure;
      *opts.progress << "\n";
    }
    const bool failed = rec.status == CheckStatus::Fail;
    cert.checks.push_back(std::move(rec));
    if (failed) {
      cert.failed_check = def.id;
      break;
    }
  }

  cert.pass = !cert.failed_check.has_value();
  cert.lambda1 = ctx.lambda1;
  if (ctx.lambda2) {
    cert.lambda2 = ctx.lambda2;
  } else if (opts.skip.count("topdeg")) {
    cert.lambda2 = 6;
    cert.lambda2_assumed = true;
  }
  cert.total_seconds = seconds_since(start);
  return cert;
}

}  // namespace phm
