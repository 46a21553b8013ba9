#include "phm/rational.hpp"

#include <stdexcept>

namespace phm {

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = s.find('/');
  auto check_int = [](const std::string& part) {
    std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i >= part.size()) return false;
    for (; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') return false;
    }
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!check_int(num) || !check_int(den)) {
    throw std::invalid_argument("malformed rational literal: " + std::string(text));
  }
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!den.empty() && den[0] == '+') den.erase(0, 1);
  Integer n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

Integer symmetric_mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (2 * r > m) r -= m;
  return r;
}

}  // namespace phm
