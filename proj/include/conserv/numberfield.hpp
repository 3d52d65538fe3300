#pragma once

#include <vector>

#include "conserv/bigfloat.hpp"
#include "conserv/unipoly.hpp"

namespace conserv {

// The algebra Q[t]/(h). With h irreducible this is a number field. Arithmetic
// runs in the integral model Z[psi]/(H) with psi = L t, where L is the leading
// coefficient of the primitive form of h and H is monic with integer coefficients.
class NumberField {
 public:
  // value = num(psi) / den, deg num < deg h.
  struct Elem {
    std::vector<Integer> num;
    Integer den = 1;
  };

  explicit NumberField(UniPoly modulus, bool check_irreducible = true);

  const UniPoly& modulus() const { return h_; }
  int degree() const { return h_.degree(); }

  Elem from_poly(const UniPoly& a) const;
  UniPoly to_poly(const Elem& a) const;
  Elem from_rational(const Rational& c) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scale(const Elem& a, const Rational& c) const;
  Elem neg(const Elem& a) const;
  Elem pow(const Elem& a, unsigned k) const;
  // Throws ValidationError when a is not invertible.
  Elem inverse(const Elem& a) const;
  static bool is_zero(const Elem& a) { return a.num.empty(); }

  // Polynomial-level conveniences (representatives of degree < deg h).
  UniPoly reduce(const UniPoly& a) const;
  UniPoly mul(const UniPoly& a, const UniPoly& b) const;
  UniPoly pow(const UniPoly& a, unsigned k) const;
  UniPoly inverse(const UniPoly& a) const;
  bool is_zero(const UniPoly& a) const { return reduce(a).is_zero(); }

  // Characteristic polynomial of multiplication by a (monic, degree deg h),
  // by multimodular Hessenberg reduction, verified exactly.
  UniPoly charpoly(const UniPoly& a) const;
  // Minimal polynomial over the rationals (primitive integer form); for a
  // reducible modulus this is the product of distinct minimal polynomials.
  UniPoly minpoly(const UniPoly& a) const;

  // Numeric value of a at the embedding t = theta, at the working precision.
  // theta is refined first, with guard bits for the height of a.
  BigComplex embed(const UniPoly& a, const BigComplex& theta) const;
  // Newton refinement of an approximate root of the modulus to the working precision.
  BigComplex refine_root(const BigComplex& theta) const;

 private:
  void normalize(Elem& a) const;
  void reduce_num(std::vector<Integer>& num) const;
  UniPoly h_;                  // monic rational form
  Integer lead_;               // L
  std::vector<Integer> big_h_; // monic integer H, without the leading 1
};

// Element wrapper so field-generic algorithms can run over a number field.
class NfElem {
 public:
  NfElem() = default;
  NfElem(const NumberField* k, const UniPoly& v) : k_(k), e_(k->from_poly(v)) {}
  NfElem(const NumberField* k, const Rational& c) : k_(k), e_(k->from_rational(c)) {}
  NfElem(const NumberField* k, NumberField::Elem e) : k_(k), e_(std::move(e)) {}

  const NumberField* field() const { return k_; }
  const NumberField::Elem& elem() const { return e_; }
  UniPoly value() const { return k_->to_poly(e_); }
  bool is_zero() const { return NumberField::is_zero(e_); }

  friend NfElem operator+(const NfElem& a, const NfElem& b) { return {a.k_, a.k_->add(a.e_, b.e_)}; }
  friend NfElem operator-(const NfElem& a, const NfElem& b) { return {a.k_, a.k_->sub(a.e_, b.e_)}; }
  friend NfElem operator-(const NfElem& a) { return {a.k_, a.k_->neg(a.e_)}; }
  friend NfElem operator*(const NfElem& a, const NfElem& b) { return {a.k_, a.k_->mul(a.e_, b.e_)}; }
  friend NfElem operator*(const NfElem& a, const Rational& c) { return {a.k_, a.k_->scale(a.e_, c)}; }
  friend NfElem operator/(const NfElem& a, const NfElem& b) { return {a.k_, a.k_->mul(a.e_, a.k_->inverse(b.e_))}; }
  friend bool operator==(const NfElem& a, const NfElem& b) { return (a - b).is_zero(); }
  friend bool operator!=(const NfElem& a, const NfElem& b) { return !(a == b); }

 private:
  const NumberField* k_ = nullptr;
  NumberField::Elem e_;
};

}  // namespace conserv
