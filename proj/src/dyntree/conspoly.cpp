#include "conserv/conspoly.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "conserv/errors.hpp"
#include "conserv/roots.hpp"

namespace conserv {

FieldCoefficients::FieldCoefficients(std::shared_ptr<const NumberField> field, std::vector<UniPoly> numerators, UniPoly denominator,
                                     std::vector<MultiPoly> coefficients)
    : field_(std::move(field)),
      numerators_(std::move(numerators)),
      denominator_(std::move(denominator)),
      coefficients_(std::move(coefficients)) {
  if (denominator_.is_zero()) throw ValidationError("zero parameter denominator");
  height_ = height_bits(denominator_);
  for (const auto& n : numerators_) height_ = std::max(height_, height_bits(n));
}

const std::vector<UniPoly>& FieldCoefficients::parameters() const {
  if (!have_parameters_) {
    const UniPoly inv = field_->inverse(field_->reduce(denominator_));
    for (const auto& n : numerators_) parameters_.push_back(field_->mul(field_->reduce(n), inv));
    have_parameters_ = true;
  }
  return parameters_;
}

const std::vector<UniPoly>& FieldCoefficients::values() const {
  if (!have_values_) {
    const auto& u = parameters();
    const NumberField* k = field_.get();
    std::vector<NumberField::Elem> ue;
    for (const auto& x : u) ue.push_back(k->from_poly(x));
    // Powers are shared between the coefficient polynomials.
    std::map<std::pair<std::size_t, int>, NumberField::Elem> powers;
    std::function<const NumberField::Elem&(std::size_t, int)> power = [&](std::size_t j, int e) -> const NumberField::Elem& {
      auto key = std::make_pair(j, e);
      auto it = powers.find(key);
      if (it != powers.end()) return it->second;
      NumberField::Elem v = e == 1 ? ue[j] : k->mul(power(j, e - 1), ue[j]);
      return powers.emplace(key, std::move(v)).first->second;
    };
    for (const auto& f : coefficients_) {
      NumberField::Elem acc;
      for (const auto& [e, c] : f.terms()) {
        NumberField::Elem term = k->from_rational(c);
        for (std::size_t j = 0; j < e.size(); ++j)
          if (e[j]) term = k->mul(term, power(j, e[j]));
        acc = k->add(acc, term);
      }
      values_.push_back(k->to_poly(acc));
    }
    have_values_ = true;
  }
  return values_;
}

std::vector<BigComplex> FieldCoefficients::embed(const BigComplex& theta) const {
  const unsigned outer = working_precision();
  std::vector<BigComplex> u;
  {
    PrecisionScope scope(outer + static_cast<unsigned>(height_) + 32);
    const BigComplex t = field_->refine_root(theta);
    const BigComplex den = evaluate(denominator_, t);
    for (const auto& n : numerators_) {
      BigComplex v = evaluate(n, t) / den;
      u.emplace_back(v.re, v.im);
    }
  }
  PrecisionScope scope(outer + 32);
  std::vector<BigComplex> out;
  for (const auto& f : coefficients_) {
    BigComplex acc;
    for (const auto& [e, c] : f.terms()) {
      BigComplex term{BigFloat(c), BigFloat(0L)};
      for (std::size_t j = 0; j < e.size(); ++j)
        for (int r = 0; r < e[j]; ++r) term *= u[j];
      acc += term;
    }
    PrecisionScope back(outer);
    out.emplace_back(acc.re, acc.im);
  }
  return out;
}

std::optional<std::vector<modp::u64>> FieldCoefficients::image(modp::u64 p, modp::u64 r) const {
  auto dp = modp::reduce(denominator_, p);
  if (!dp) return std::nullopt;
  const modp::u64 d = modp::evaluate(*dp, r, p);
  if (d == 0) return std::nullopt;
  const modp::u64 dinv = modp::inv(d, p);
  std::vector<modp::u64> u;
  for (const auto& n : numerators_) {
    auto np = modp::reduce(n, p);
    if (!np) return std::nullopt;
    u.push_back(modp::mul(modp::evaluate(*np, r, p), dinv, p));
  }
  std::vector<modp::u64> out;
  for (const auto& f : coefficients_) {
    auto v = evaluate_mod(f, u, p);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

ConservativePolynomial ConservativePolynomial::from_rational(const UniPoly& c, unsigned precision, std::string source) {
  if (c.degree() < 2) throw ValidationError("a conservative polynomial has degree at least 2");
  ConservativePolynomial out;
  out.degree = c.degree();
  out.precision = precision;
  out.rational = c;
  out.source = std::move(source);
  PrecisionScope scope(precision + 32);
  for (const auto& q : c.coeffs()) out.coeffs.emplace_back(BigFloat(q));
  auto parts = squarefree_decomposition(derivative(c));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].degree() < 1) continue;
    for (auto& disk : complex_roots(parts[i], 2 * precision))
      out.critical_points.push_back({std::move(disk.center), static_cast<int>(i) + 1});
  }
  return out;
}

std::vector<int> ConservativePolynomial::critical_type() const {
  std::vector<int> t;
  for (const auto& cp : critical_points) t.push_back(cp.multiplicity);
  std::sort(t.rbegin(), t.rend());
  return t;
}

std::vector<BigComplex> ConservativePolynomial::coefficients() const {
  std::vector<BigComplex> out;
  if (rational) {
    for (const auto& q : rational->coeffs()) out.emplace_back(BigFloat(q));
    return out;
  }
  if (exact) return exact->embed(theta);
  for (const auto& c : coeffs) out.push_back(BigComplex(BigFloat(c.re), BigFloat(c.im)));
  return out;
}

BigComplex ConservativePolynomial::operator()(const BigComplex& z) const { return evaluate(coefficients(), z); }

BigComplex ConservativePolynomial::derivative_at(const BigComplex& z) const {
  auto c = coefficients();
  std::vector<BigComplex> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * BigFloat(static_cast<long>(k)));
  return evaluate(d, z);
}

void check_conservative(const ConservativePolynomial& c) {
  if (c.rational) {
    const UniPoly shifted = *c.rational - UniPoly::x();
    for (const auto& part : squarefree_decomposition(derivative(*c.rational)))
      if (part.degree() >= 1 && !(shifted % part).is_zero()) throw ValidationError("a critical point is not fixed");
    return;
  }
  PrecisionScope scope(c.precision + 32);
  auto coeffs = c.coefficients();
  for (const auto& cp : c.critical_points) {
    BigComplex r = evaluate(coeffs, cp.location) - cp.location;
    BigFloat scale = 1;
    BigFloat zpow = 1;
    BigFloat az = abs(cp.location);
    for (const auto& a : coeffs) {
      scale += abs(a) * zpow;
      zpow *= az;
    }
    if (abs(r) > scale * pow2(-static_cast<long>(c.precision / 2))) throw ValidationError("a critical point is not fixed");
  }
}

}  // namespace conserv
