#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "phm/rational.hpp"
#include "phm/sparse_poly.hpp"

namespace phm {

/// Returns r with p == q * r, or nullopt when q does not divide p.
/// Throws std::domain_error for q == 0.
std::optional<SparsePoly> exact_divide(const SparsePoly& p, const SparsePoly& q);

/// Largest k with q^k | p. Throws std::domain_error for p == 0 or constant q.
unsigned vanishing_order(const SparsePoly& p, const SparsePoly& q);

/// Lowest total degree of p(pt + shift): the multiplicity of the curve
/// {p = 0} at pt, 0 when p(pt) != 0. Throws std::domain_error for p == 0.
unsigned multiplicity_at_point(const SparsePoly& p, std::span<const Rational> pt);

/// Greatest common divisor, normalized to an integer primitive polynomial
/// with positive leading coefficient (1 for coprime inputs). The heuristic
/// evaluation gcd runs first; each candidate is accepted only after it
/// exactly divides both inputs, otherwise the primitive remainder sequence
/// decides. gcd(p, 0) is the normalized p.
SparsePoly gcd(const SparsePoly& p, const SparsePoly& q);

/// Primitive polynomial remainder sequence gcd, recursive in the variables.
/// Same normalization as gcd(); slower, kept as the reference route.
SparsePoly gcd_prs(const SparsePoly& p, const SparsePoly& q);

/// Pseudo-remainder of p by q with respect to `var`:
/// lc(q)^(deg p - deg q + 1) * p mod q.
SparsePoly pseudo_remainder(const SparsePoly& p, const SparsePoly& q, std::size_t var);

/// Sylvester resultant with respect to `var` (fraction-free determinant).
/// The result keeps the variable list and does not involve `var`.
/// If exactly one input is free of `var`, the usual convention
/// Res(p, q) = p^deg(q) (resp. q^deg(p)) applies; both free throws.
SparsePoly resultant(const SparsePoly& p, const SparsePoly& q, std::size_t var);

/// Determinant of a square polynomial matrix by Bareiss elimination.
SparsePoly determinant(std::vector<std::vector<SparsePoly>> m);

struct Bidegree {
  unsigned dx = 0;
  unsigned dy = 0;
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
  friend Bidegree operator+(Bidegree a, Bidegree b) { return {a.dx + b.dx, a.dy + b.dy}; }
};

/// Degrees in the first and second variable. Throws std::domain_error for 0.
Bidegree bidegree(const SparsePoly& p);

/// Repeatedly divides p by each candidate; returns the exponents found and
/// the cofactor left over.
struct TrialDivision {
  std::vector<unsigned> exponents;
  SparsePoly residual;
};
TrialDivision trial_divide(const SparsePoly& p, std::span<const SparsePoly> candidates);

/// Square-free part (product of distinct irreducible factors), normalized
/// like gcd().
SparsePoly squarefree_part(const SparsePoly& p);

}  // namespace phm
