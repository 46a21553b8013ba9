#include "phm/sparse_poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace phm {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::from_exponents(std::span<const unsigned> exponents) {
  if (exponents.size() > kMaxVariables) {
    throw std::invalid_argument("too many variables for a packed monomial");
  }
  Monomial m;
  for (std::size_t i = 0; i < exponents.size(); ++i) m = m.with_exponent(i, exponents[i]);
  return m;
}

Monomial Monomial::unit(std::size_t var, unsigned power) {
  return Monomial{}.with_exponent(var, power);
}

unsigned Monomial::total_degree() const {
  std::uint64_t b = bits_;
  unsigned d = 0;
  for (std::size_t i = 0; i < kMaxVariables; ++i, b >>= 16) d += static_cast<unsigned>(b & kMaxExponent);
  return d;
}

Monomial Monomial::with_exponent(std::size_t var, unsigned e) const {
  if (var >= kMaxVariables) throw std::out_of_range("monomial variable index");
  if (e > kMaxExponent) throw std::overflow_error("monomial exponent overflow");
  Monomial m = *this;
  m.bits_ &= ~(std::uint64_t{kMaxExponent} << shift(var));
  m.bits_ |= std::uint64_t{e} << shift(var);
  return m;
}

bool Monomial::divides(Monomial other) const {
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    if (exponent(i) > other.exponent(i)) return false;
  }
  return true;
}

Monomial operator*(Monomial a, Monomial b) {
  Monomial m;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    const unsigned e = a.exponent(i) + b.exponent(i);
    if (e > kMaxExponent) throw std::overflow_error("monomial exponent overflow");
    m.bits_ |= std::uint64_t{e} << Monomial::shift(i);
  }
  return m;
}

Monomial operator/(Monomial a, Monomial b) {
  Monomial m;
  m.bits_ = a.bits_ - b.bits_;
  return m;
}

// -------------------------------------------------------------- SparsePoly

SparsePoly::SparsePoly(std::vector<std::string> vars) : vars_(std::move(vars)) {
  if (vars_.size() > kMaxVariables) throw std::invalid_argument("at most 4 variables supported");
}

SparsePoly::SparsePoly(std::vector<std::string> vars, const Rational& constant)
    : SparsePoly(std::move(vars)) {
  add_term(Monomial{}, constant);
}

SparsePoly SparsePoly::variable(std::vector<std::string> vars, std::size_t index) {
  if (index >= vars.size()) throw std::out_of_range("variable index");
  SparsePoly p(std::move(vars));
  p.terms_.emplace(Monomial::unit(index), Rational(1));
  return p;
}

SparsePoly SparsePoly::monomial(std::vector<std::string> vars, Monomial m, const Rational& c) {
  SparsePoly p(std::move(vars));
  if (c != 0) p.terms_.emplace(m, c);
  return p;
}

bool SparsePoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational SparsePoly::constant_term() const { return coefficient(Monomial{}); }

Rational SparsePoly::coefficient(Monomial m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

unsigned SparsePoly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(var));
  return d;
}

unsigned SparsePoly::total_degree() const {
  return terms_.empty() ? 0 : terms_.begin()->first.total_degree();
}

unsigned SparsePoly::lowest_total_degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.total_degree();
}

Rational SparsePoly::evaluate(std::span<const Rational> point) const {
  if (point.size() < vars_.size()) throw std::invalid_argument("point has too few coordinates");
  std::vector<std::vector<Rational>> powers(vars_.size());
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    const unsigned d = degree_in(v);
    powers[v].resize(d + 1);
    powers[v][0] = 1;
    for (unsigned k = 1; k <= d; ++k) powers[v][k] = powers[v][k - 1] * point[v];
  }
  Rational acc = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const unsigned e = m.exponent(v);
      if (e > 0) t *= powers[v][e];
    }
    acc += t;
  }
  return acc;
}

SparsePoly SparsePoly::derivative(std::size_t var) const {
  SparsePoly out(vars_);
  for (const auto& [m, c] : terms_) {
    const unsigned e = m.exponent(var);
    if (e == 0) continue;
    out.terms_.emplace(m.with_exponent(var, e - 1), c * e);
  }
  return out;
}

SparsePoly SparsePoly::substitute(std::size_t var, const SparsePoly& value) const {
  const auto coeffs = coefficients_in(var);
  // Horner in `value`.
  SparsePoly acc(merged_vars(value));
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc *= value;
    acc += *it;
  }
  if (acc.vars_.empty()) acc.vars_ = vars_;
  return acc;
}

SparsePoly SparsePoly::substitute(std::size_t var, const Rational& value) const {
  SparsePoly out(vars_);
  std::vector<Rational> cache{Rational(1)};
  for (const auto& [m, c] : terms_) {
    const unsigned e = m.exponent(var);
    while (cache.size() <= e) cache.push_back(cache.back() * value);
    out.add_term(m.with_exponent(var, 0), c * cache[e]);
  }
  return out;
}

SparsePoly SparsePoly::compose(std::span<const SparsePoly> values) const {
  if (values.size() != vars_.size()) throw std::invalid_argument("compose: one value per variable");
  std::vector<std::string> target;
  for (const auto& v : values) {
    if (!v.vars_.empty()) {
      if (target.empty()) target = v.vars_;
      else if (target != v.vars_) throw std::invalid_argument("compose: values over different variables");
    }
  }
  std::vector<std::vector<SparsePoly>> powers(values.size());
  for (std::size_t v = 0; v < values.size(); ++v) {
    const unsigned d = degree_in(v);
    powers[v].reserve(d + 1);
    powers[v].emplace_back(target, Rational(1));
    for (unsigned k = 1; k <= d; ++k) powers[v].push_back(powers[v].back() * values[v]);
  }
  SparsePoly acc(target);
  for (const auto& [m, c] : terms_) {
    SparsePoly t(target, c);
    for (std::size_t v = 0; v < values.size(); ++v) {
      const unsigned e = m.exponent(v);
      if (e > 0) t *= powers[v][e];
    }
    acc += t;
  }
  return acc;
}

std::vector<SparsePoly> SparsePoly::coefficients_in(std::size_t var) const {
  std::vector<SparsePoly> out(degree_in(var) + 1, SparsePoly(vars_));
  for (const auto& [m, c] : terms_) {
    out[m.exponent(var)].terms_.emplace(m.with_exponent(var, 0), c);
  }
  return out;
}

SparsePoly SparsePoly::renamed(std::vector<std::string> vars) const {
  if (vars.size() != vars_.size() && !vars_.empty()) {
    throw std::invalid_argument("renamed: variable count mismatch");
  }
  SparsePoly out = *this;
  out.vars_ = std::move(vars);
  return out;
}

SparsePoly SparsePoly::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != vars_.size()) throw std::invalid_argument("permuted: bad permutation");
  std::vector<std::string> vars(vars_.size());
  for (std::size_t i = 0; i < perm.size(); ++i) vars[i] = vars_[perm[i]];
  SparsePoly out(vars);
  for (const auto& [m, c] : terms_) {
    Monomial n;
    for (std::size_t i = 0; i < perm.size(); ++i) n = n.with_exponent(i, m.exponent(perm[i]));
    out.terms_.emplace(n, c);
  }
  return out;
}

SparsePoly SparsePoly::shifted(std::size_t var, unsigned k) const {
  SparsePoly out(vars_);
  const Monomial s = Monomial::unit(var, k);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m * s, c);
  return out;
}

Rational SparsePoly::content() const {
  if (terms_.empty()) return Rational(0);
  Integer g = 0;
  Integer l = 1;
  for (const auto& [m, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational r(g, l);
  r.canonicalize();
  return r;
}

SparsePoly SparsePoly::primitive() const {
  if (terms_.empty()) return *this;
  Rational c = content();
  if (leading_coefficient() < 0) c = -c;
  if (c == 1) return *this;
  return *this / c;
}

SparsePoly SparsePoly::monic() const {
  if (terms_.empty()) return *this;
  return *this / leading_coefficient();
}

bool SparsePoly::has_integer_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.second.get_den() == 1; });
}

void SparsePoly::add_term(Monomial m, const Rational& c_in) {
  Rational c = c_in;
  c.canonicalize();
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

const std::vector<std::string>& SparsePoly::merged_vars(const SparsePoly& o) const {
  if (vars_.empty()) return o.vars_;
  if (o.vars_.empty() || o.vars_ == vars_) return vars_;
  throw std::invalid_argument("polynomials over different variable lists");
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  vars_ = merged_vars(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
  vars_ = merged_vars(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SparsePoly& SparsePoly::operator*=(const SparsePoly& o) {
  *this = *this * o;
  return *this;
}

SparsePoly& SparsePoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

SparsePoly& SparsePoly::operator/=(const Rational& c) {
  if (c == 0) throw std::domain_error("polynomial division by zero");
  for (auto& [m, v] : terms_) v /= c;
  return *this;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
  SparsePoly out(a.merged_vars(b));
  if (a.terms_.empty() || b.terms_.empty()) return out;
  if (a.terms_.size() == 1 || b.terms_.size() == 1) {
    const auto& single = a.terms_.size() == 1 ? a : b;
    const auto& other = a.terms_.size() == 1 ? b : a;
    const auto& [sm, sc] = *single.terms_.begin();
    for (const auto& [m, c] : other.terms_) out.terms_.emplace_hint(out.terms_.end(), m * sm, c * sc);
    return out;
  }
  const bool integral = a.has_integer_coefficients() && b.has_integer_coefficients();
  if (integral) {
    std::unordered_map<std::uint64_t, Integer> acc;
    acc.reserve(a.terms_.size() * b.terms_.size() / 2 + 16);
    Integer tmp;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Integer& slot = acc[(ma * mb).packed()];
        mpz_addmul(slot.get_mpz_t(), ca.get_num_mpz_t(), cb.get_num_mpz_t());
      }
    }
    std::vector<std::pair<Monomial, Rational>> sorted;
    sorted.reserve(acc.size());
    for (auto& [key, value] : acc) {
      if (value == 0) continue;
      Monomial m;
      for (std::size_t i = 0; i < kMaxVariables; ++i) {
        m = m.with_exponent(i, static_cast<unsigned>((key >> (16 * (kMaxVariables - 1 - i))) & kMaxExponent));
      }
      sorted.emplace_back(m, Rational(value));
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    for (auto& t : sorted) out.terms_.emplace_hint(out.terms_.end(), t.first, std::move(t.second));
    return out;
  }
  std::unordered_map<std::uint64_t, std::pair<Monomial, Rational>> acc;
  acc.reserve(a.terms_.size() * b.terms_.size() / 2 + 16);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      const Monomial m = ma * mb;
      auto [it, inserted] = acc.try_emplace(m.packed(), m, Rational(0));
      it->second.second += ca * cb;
    }
  }
  for (auto& [key, t] : acc) {
    if (t.second != 0) out.terms_.emplace(t.first, std::move(t.second));
  }
  return out;
}

SparsePoly operator-(SparsePoly a) {
  for (auto& [m, c] : a.terms_) c = -c;
  return a;
}

bool operator==(const SparsePoly& a, const SparsePoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (!a.terms_.empty() && !a.vars_.empty() && !b.vars_.empty() && a.vars_ != b.vars_) return false;
  return a.terms_ == b.terms_;
}

SparsePoly SparsePoly::pow(unsigned e) const {
  SparsePoly result(vars_, Rational(1));
  SparsePoly base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

namespace {

std::string monomial_text(const std::vector<std::string>& vars, Monomial m, bool explicit_exponents) {
  std::string out;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const unsigned e = m.exponent(v);
    if (e == 0 && !explicit_exponents) continue;
    if (!out.empty()) out += '*';
    out += vars[v];
    if (e != 1 || explicit_exponents) out += '^' + std::to_string(e);
  }
  return out;
}

}  // namespace

std::string SparsePoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += '-';
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    const std::string mono = monomial_text(vars_, m, false);
    if (mono.empty()) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + '*';
      out += mono;
    }
  }
  return out;
}

std::string SparsePoly::canonical() const {
  std::string out = "[";
  for (std::size_t v = 0; v < vars_.size(); ++v) out += (v ? "," : "") + vars_[v];
  out += "]";
  if (terms_.empty()) return out + " 0";
  bool first = true;
  for (const auto& [m, c] : terms_) {
    out += first ? " " : " + ";
    first = false;
    out += c.get_str();
    const std::string mono = monomial_text(vars_, m, true);
    if (!mono.empty()) out += '*' + mono;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const SparsePoly& p) { return os << p.str(); }

long double to_long_double(const Rational& r) {
  if (r == 0) return 0.0L;
  const Integer& num = r.get_num();
  const Integer& den = r.get_den();
  const long nb = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  const long db = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  // Scale so the integer quotient carries about 64 significant bits.
  const long shift = 64 - (nb - db);
  Integer q;
  if (shift >= 0) {
    Integer scaled = num;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    mpz_tdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  } else {
    Integer scaled = den;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
    mpz_tdiv_q(q.get_mpz_t(), num.get_mpz_t(), scaled.get_mpz_t());
  }
  const bool negative = q < 0;
  if (negative) q = -q;
  long extra = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - 64;
  if (extra > 0) mpz_tdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(extra));
  else extra = 0;
  const unsigned long long top = mpz_get_ui(q.get_mpz_t());
  long double v = std::ldexp(static_cast<long double>(top), static_cast<int>(extra - shift));
  return negative ? -v : v;
}

// ------------------------------------------------------------------ parser

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::vector<std::string> vars)
      : text_(text), vars_(std::move(vars)) {}

  SparsePoly run() {
    SparsePoly p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("polynomial parse error at " + std::to_string(pos_) + ": " + why +
                                " in '" + std::string(text_) + "'");
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  SparsePoly expr() {
    SparsePoly acc = term();
    while (true) {
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else return acc;
    }
  }

  SparsePoly term() {
    SparsePoly acc = unary();
    while (true) {
      if (eat('*')) {
        acc *= unary();
      } else if (eat('/')) {
        SparsePoly d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        acc /= d.constant_term();
      } else {
        return acc;
      }
    }
  }

  SparsePoly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  SparsePoly power() {
    SparsePoly base = primary();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  SparsePoly primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      SparsePoly inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return SparsePoly(vars_, Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) fail("unknown variable '" + name + "'");
      return SparsePoly::variable(vars_, static_cast<std::size_t>(it - vars_.begin()));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::vector<std::string> vars_;
  std::size_t pos_ = 0;
};

}  // namespace

SparsePoly SparsePoly::parse(std::string_view text, std::vector<std::string> vars) {
  return PolyParser(text, std::move(vars)).run();
}

}  // namespace phm
