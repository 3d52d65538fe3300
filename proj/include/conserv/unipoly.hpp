#pragma once

#include <utility>
#include <string>
#include <vector>

#include "conserv/rational.hpp"

namespace conserv {

// Dense univariate polynomial over the rationals, lowest degree first.
// The coefficient vector never carries trailing zeros.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs);
  UniPoly(std::initializer_list<Rational> coeffs);

  static UniPoly constant(const Rational& c);
  static UniPoly monomial(const Rational& c, int k);
  static UniPoly x() { return monomial(1, 1); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  // Coefficient of x^i, zero outside the stored range.
  Rational coeff(int i) const;
  const Rational& leading() const;

  Rational operator()(const Rational& x) const;

  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  UniPoly& operator*=(const UniPoly& o);
  UniPoly& operator*=(const Rational& c);

  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(UniPoly a, const Rational& c) { return a *= c; }
  friend UniPoly operator*(const Rational& c, UniPoly a) { return a *= c; }
  friend UniPoly operator-(UniPoly a);
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

struct DivRem {
  UniPoly quotient;
  UniPoly remainder;
};

// Euclidean division; throws ValidationError on a zero divisor.
DivRem divrem(const UniPoly& f, const UniPoly& g);
UniPoly operator%(const UniPoly& f, const UniPoly& g);

UniPoly derivative(const UniPoly& f);
// Antiderivative with zero constant term.
UniPoly integral(const UniPoly& f);
UniPoly monic(const UniPoly& f);
// Monic gcd; gcd(0, 0) = 0.
UniPoly gcd(const UniPoly& f, const UniPoly& g);

struct ExtendedGcd {
  UniPoly gcd;  // monic
  UniPoly s;    // s*f + t*g = gcd
  UniPoly t;
};
ExtendedGcd extended_gcd(const UniPoly& f, const UniPoly& g);

// f(g(x)).
UniPoly compose(const UniPoly& f, const UniPoly& g);
UniPoly pow(const UniPoly& f, unsigned k);

// Integer polynomial with coprime coefficients and positive leading coefficient,
// equal to f up to a rational unit. Zero maps to zero.
UniPoly primitive_part(const UniPoly& f);
// The rational c with f = c * primitive_part(f).
Rational content(const UniPoly& f);
bool has_integer_coeffs(const UniPoly& f);

// Product of the distinct irreducible factors, as a primitive integer polynomial.
UniPoly squarefree_part(const UniPoly& f);

// Yun decomposition: f = c * prod_i parts[i]^(i+1), each part squarefree and monic.
std::vector<UniPoly> squarefree_decomposition(const UniPoly& f);

// Resultant of two univariate polynomials via the Euclidean sequence.
Rational resultant(const UniPoly& f, const UniPoly& g);

// Largest |coefficient| bit size, on the primitive form.
std::size_t height_bits(const UniPoly& f);
// Human-readable form in the variable `var`, highest degree first, e.g. "-3/2*z^5 + 5/2*z^3".
std::string to_string(const UniPoly& f, const std::string& var = "z");

// Canonical ordering: by degree, then coefficients lexicographically.
bool canonical_less(const UniPoly& a, const UniPoly& b);

}  // namespace conserv
