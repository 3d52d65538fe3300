#pragma once

#include <optional>
#include <vector>

#include "conserv/conspoly.hpp"
#include "conserv/unipoly.hpp"

namespace conserv {

// z^d.
ConservativePolynomial star_polynomial(int d);
// f_d(z) = z^d + d/(d-1) z; its tree is the star with a black center.
ConservativePolynomial reversed_star(int d);
// C(z) = c * integral_0^z t^r (1-t)^s dt with c = (r+s+1)!/(r!s!), so C(1) = 1.
ConservativePolynomial lambda_rs(int r, int s);
Rational lambda_constant(int r, int s);

struct RotationForm {
  int order = 1;               // largest k with C(z) = z R(z^k)
  std::optional<UniPoly> rest;  // R, for rational input
};
// Requires C(0) = 0 (ValidationError otherwise).
RotationForm rotation_form(const ConservativePolynomial& c);
int rotation_form_order(const ConservativePolynomial& c);

// C = outer(inner(z)), inner monic with inner(0) = 0.
struct Decomposition {
  std::vector<BigComplex> outer, inner;  // numeric coefficients, lowest degree first
  std::optional<UniPoly> outer_rational, inner_rational;
  bool exact = false;  // verified by exact substitution
};
// A nontrivial decomposition if one exists. Rational input is handled exactly.
// Number field input is certified indecomposable by reduction at degree-one primes,
// falling back to exact arithmetic in the field. Numeric input uses tolerances and
// throws PrecisionExhaustedError when undecided.
std::optional<Decomposition> decompose(const ConservativePolynomial& c);
// Exact decomposition over the rationals.
std::optional<std::pair<UniPoly, UniPoly>> decompose_rational(const UniPoly& f);

// A^{-1} o C o A for A(z) = a z + b.
ConservativePolynomial affine_conjugate(const ConservativePolynomial& c, const BigComplex& a, const BigComplex& b);
ConservativePolynomial affine_conjugate(const ConservativePolynomial& c, const Rational& a, const Rational& b);

// Whether C2 = A^{-1} o C1 o A for some affine A. Candidates come from maximal
// critical points and the (d-1) choices of scale; each is checked to 2^(-precision/2).
// Escalates precision twice when a candidate is ambiguous, then throws PrecisionExhaustedError.
bool are_equivalent(const ConservativePolynomial& c1, const ConservativePolynomial& c2, unsigned precision = 212);

}  // namespace conserv
