#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conserv/bigfloat.hpp"
#include "conserv/modular.hpp"
#include "conserv/multipoly.hpp"
#include "conserv/numberfield.hpp"
#include "conserv/unipoly.hpp"

namespace conserv {

struct CriticalPoint {
  BigComplex location;
  int multiplicity = 1;  // order of vanishing of C'
};

// Exact coefficients over K = Q[t]/(modulus), given as polynomials in parameters
// u_j = num_j(t) / den(t). Exact field values are computed on first use only, since
// they can be far taller than the parametrization.
class FieldCoefficients {
 public:
  FieldCoefficients(std::shared_ptr<const NumberField> field, std::vector<UniPoly> numerators, UniPoly denominator,
                    std::vector<MultiPoly> coefficients);

  const NumberField& field() const { return *field_; }
  const std::shared_ptr<const NumberField>& field_ptr() const { return field_; }
  std::size_t size() const { return coefficients_.size(); }
  const std::vector<MultiPoly>& coefficient_polys() const { return coefficients_; }

  // Parameter values in K.
  const std::vector<UniPoly>& parameters() const;
  // Coefficients in K, lowest degree first.
  const std::vector<UniPoly>& values() const;
  // Numeric coefficients at t = theta, at the working precision.
  std::vector<BigComplex> embed(const BigComplex& theta) const;
  // Coefficient images at t = r modulo p, r a root of the modulus; nullopt if not p-integral.
  std::optional<std::vector<modp::u64>> image(modp::u64 p, modp::u64 r) const;

 private:
  std::shared_ptr<const NumberField> field_;
  std::vector<UniPoly> numerators_;
  UniPoly denominator_;
  std::vector<MultiPoly> coefficients_;
  std::size_t height_ = 0;
  mutable std::vector<UniPoly> parameters_;
  mutable std::vector<UniPoly> values_;
  mutable bool have_parameters_ = false, have_values_ = false;
};

// A polynomial whose critical points are all fixed. Coefficients are kept
// numerically (lowest degree first) and, when available, exactly: either over
// the rationals or over a number field, embedded at t = theta.
struct ConservativePolynomial {
  int degree = 0;
  unsigned precision = 212;
  std::vector<BigComplex> coeffs;
  std::optional<UniPoly> rational;
  std::shared_ptr<const FieldCoefficients> exact;
  BigComplex theta;
  std::vector<CriticalPoint> critical_points;
  std::string source;

  // Builds from rational coefficients; critical points found exactly up to numeric location.
  static ConservativePolynomial from_rational(const UniPoly& c, unsigned precision = 212, std::string source = "input");
  // Multiplicity type of C' (non-increasing).
  std::vector<int> critical_type() const;
  // Coefficients at the current working precision, re-evaluated from exact data when present.
  std::vector<BigComplex> coefficients() const;
  BigComplex operator()(const BigComplex& z) const;
  BigComplex derivative_at(const BigComplex& z) const;
};

// Throws ValidationError if some critical point is not fixed (exactly for rational
// coefficients, to 2^(-precision/2) relative accuracy otherwise).
void check_conservative(const ConservativePolynomial& c);

}  // namespace conserv
