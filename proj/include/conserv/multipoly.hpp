#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conserv/modular.hpp"
#include "conserv/unipoly.hpp"

namespace conserv {

using Exponent = std::vector<int>;

// Sparse polynomial in a fixed number of variables over the rationals.
// Terms are keyed by exponent vectors in lexicographic order (variable 0 most significant).
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const Rational& c);
  static MultiPoly var(std::size_t nvars, std::size_t i);
  static MultiPoly from_unipoly(const UniPoly& f, std::size_t nvars, std::size_t var);

  std::size_t nvars() const { return nvars_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;

  // Degree in one variable; -1 for the zero polynomial.
  int degree(std::size_t var) const;
  int total_degree() const;

  void add_term(const Exponent& e, const Rational& c);

  // Coefficient of var^k, as a polynomial not involving var.
  MultiPoly coeff_in(std::size_t var, int k) const;
  MultiPoly substitute(std::size_t var, const MultiPoly& value) const;
  Rational evaluate(const std::vector<Rational>& point) const;
  // Requires every other variable to be absent.
  UniPoly to_unipoly(std::size_t var) const;
  bool involves(std::size_t var) const { return degree(var) > 0; }

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend MultiPoly operator-(MultiPoly a) { return a *= Rational(-1); }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  void check_arity(const MultiPoly& o) const;
  std::size_t nvars_ = 0;
  std::map<Exponent, Rational> terms_;
};

MultiPoly pow(const MultiPoly& f, unsigned k);
// Image of f at a point modulo p; nullopt when a coefficient is not p-integral.
std::optional<modp::u64> evaluate_mod(const MultiPoly& f, const std::vector<modp::u64>& point, modp::u64 p);
MultiPoly derivative(const MultiPoly& f, std::size_t var);

// Scaled to coprime integer coefficients with positive leading (lex) coefficient.
MultiPoly primitive_part(const MultiPoly& f);

struct MultiDivRem {
  MultiPoly quotient;
  MultiPoly remainder;
};

// Division in var, where g's leading coefficient in var must be a nonzero rational constant.
// Throws UnsupportedDivisionError otherwise.
MultiDivRem divrem(const MultiPoly& f, const MultiPoly& g, std::size_t var);

// Exact quotient f / g if g divides f, otherwise nullopt.
std::optional<MultiPoly> exact_divide(const MultiPoly& f, const MultiPoly& g);

// Sylvester resultant eliminating var (fraction-free Bareiss elimination).
// Throws ValidationError if either input is zero.
MultiPoly resultant(const MultiPoly& f, const MultiPoly& g, std::size_t var);

std::string to_string(const MultiPoly& f, const std::vector<std::string>& names);

}  // namespace conserv
