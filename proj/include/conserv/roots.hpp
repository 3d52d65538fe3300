#pragma once

#include <vector>

#include "conserv/bigfloat.hpp"
#include "conserv/unipoly.hpp"

namespace conserv {

struct RootDisk {
  BigComplex center;
  BigFloat radius;  // the disk contains exactly one root
};

// Certified isolation of all complex roots of a squarefree f. Every disk has
// radius <= 2^(-precision/2) and the disks are pairwise disjoint. Working
// precision is doubled up to 4 times before PrecisionExhaustedError.
// Results are sorted by real part, then imaginary part.
std::vector<RootDisk> complex_roots(const UniPoly& f, unsigned precision);

// Uncertified roots of a polynomial with complex coefficients (lowest degree first),
// computed at the current working precision by Aberth iteration plus Newton polishing.
std::vector<BigComplex> approximate_roots(const std::vector<BigComplex>& coeffs);

BigComplex evaluate(const std::vector<BigComplex>& coeffs, const BigComplex& z);
// f(z) for a rational polynomial at the current working precision.
BigComplex evaluate(const UniPoly& f, const BigComplex& z);

struct ComplexBox {
  Rational re_lo, re_hi, im_lo, im_hi;
  bool contains(const BigComplex& z) const;
};

// An algebraic number: irreducible minimal polynomial and an isolating box.
class AlgebraicNumber {
 public:
  AlgebraicNumber(UniPoly minpoly, ComplexBox box, BigComplex approx);
  const UniPoly& minpoly() const { return minpoly_; }
  const ComplexBox& box() const { return box_; }
  int degree() const { return minpoly_.degree(); }
  bool is_real() const { return box_.im_lo < 0 && box_.im_hi > 0 && real_; }
  // Approximation to the requested number of bits.
  BigComplex approximate(unsigned bits) const;
  const BigComplex& approximation() const { return approx_; }

 private:
  UniPoly minpoly_;
  ComplexBox box_;
  BigComplex approx_;
  bool real_ = false;
};

// All roots of an irreducible polynomial as algebraic numbers, in complex_roots order.
std::vector<AlgebraicNumber> algebraic_roots(const UniPoly& irreducible, unsigned precision);

}  // namespace conserv
