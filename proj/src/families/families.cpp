#include "conserv/families.hpp"

#include <algorithm>
#include <numeric>

#include "conserv/errors.hpp"
#include "conserv/modular.hpp"
#include "conserv/roots.hpp"

namespace conserv {

namespace {

// Field operations used by the generic decomposition.
struct RationalOps {
  using E = Rational;
  E from(long n) const { return Rational(n); }
  bool is_zero(const E& a) const { return a == 0; }
  E add(const E& a, const E& b) const { return a + b; }
  E sub(const E& a, const E& b) const { return a - b; }
  E mul(const E& a, const E& b) const { return a * b; }
  E div(const E& a, const E& b) const { return a / b; }
};

struct FieldOps {
  using E = NfElem;
  const NumberField* k;
  E from(long n) const { return NfElem(k, Rational(n)); }
  bool is_zero(const E& a) const { return a.is_zero(); }
  E add(const E& a, const E& b) const { return a + b; }
  E sub(const E& a, const E& b) const { return a - b; }
  E mul(const E& a, const E& b) const { return a * b; }
  E div(const E& a, const E& b) const { return a / b; }
};

struct ModOps {
  using E = modp::u64;
  modp::u64 p;
  E from(long n) const {
    long r = n % static_cast<long>(p);
    return static_cast<E>(r < 0 ? r + static_cast<long>(p) : r);
  }
  bool is_zero(const E& a) const { return a == 0; }
  E add(const E& a, const E& b) const { return modp::add(a, b, p); }
  E sub(const E& a, const E& b) const { return modp::sub(a, b, p); }
  E mul(const E& a, const E& b) const { return modp::mul(a, b, p); }
  E div(const E& a, const E& b) const { return modp::mul(a, modp::inv(b, p), p); }
};

// Numeric field; zero means below an absolute threshold.
struct ComplexOps {
  using E = BigComplex;
  BigFloat tol;
  E from(long n) const { return BigComplex(BigFloat(n), BigFloat(0L)); }
  bool is_zero(const E& a) const { return abs(a) <= tol; }
  E add(const E& a, const E& b) const { return a + b; }
  E sub(const E& a, const E& b) const { return a - b; }
  E mul(const E& a, const E& b) const { return a * b; }
  E div(const E& a, const E& b) const { return a / b; }
};

template <class Ops>
std::vector<typename Ops::E> poly_mul(const Ops& o, const std::vector<typename Ops::E>& a, const std::vector<typename Ops::E>& b) {
  std::vector<typename Ops::E> out(a.size() + b.size() - 1, o.from(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = o.add(out[i + j], o.mul(a[i], b[j]));
  return out;
}

template <class Ops>
std::vector<typename Ops::E> poly_pow(const Ops& o, const std::vector<typename Ops::E>& a, int k) {
  std::vector<typename Ops::E> out{o.from(1)};
  for (int i = 0; i < k; ++i) out = poly_mul(o, out, a);
  return out;
}

template <class E>
struct GenericSplit {
  std::vector<E> outer, inner;
};

// Split of a monic f with f(0) = 0 and deg f = d as g(h) with deg h = e, h monic, h(0) = 0.
// The right factor is the approximate r-th root of f; the left factor comes from the
// h-adic expansion, whose digits must all be constants.
template <class Ops>
std::optional<GenericSplit<typename Ops::E>> split_monic(const Ops& o, const std::vector<typename Ops::E>& f, int e) {
  using E = typename Ops::E;
  const int d = static_cast<int>(f.size()) - 1;
  const int r = d / e;
  std::vector<E> h(static_cast<std::size_t>(e) + 1, o.from(0));
  h[static_cast<std::size_t>(e)] = o.from(1);
  for (int k = 1; k < e; ++k) {
    const std::vector<E> hr = poly_pow(o, h, r);
    const E known = hr[static_cast<std::size_t>(d - k)];
    h[static_cast<std::size_t>(e - k)] = o.div(o.sub(f[static_cast<std::size_t>(d - k)], known), o.from(r));
  }
  std::vector<E> rest = f, digits;
  for (int i = 0; i <= r; ++i) {
    // rest = q h + rem with deg rem < e.
    std::vector<E> q(rest.size() > static_cast<std::size_t>(e) ? rest.size() - static_cast<std::size_t>(e) : 1, o.from(0));
    for (int k = static_cast<int>(rest.size()) - 1; k >= e; --k) {
      const E c = rest[static_cast<std::size_t>(k)];
      if (o.is_zero(c)) continue;
      q[static_cast<std::size_t>(k - e)] = c;
      for (int j = 0; j <= e; ++j)
        rest[static_cast<std::size_t>(k - e + j)] = o.sub(rest[static_cast<std::size_t>(k - e + j)], o.mul(c, h[static_cast<std::size_t>(j)]));
    }
    for (int j = 1; j < e && j < static_cast<int>(rest.size()); ++j)
      if (!o.is_zero(rest[static_cast<std::size_t>(j)])) return std::nullopt;
    digits.push_back(rest.empty() ? o.from(0) : rest[0]);
    rest = std::move(q);
  }
  for (const auto& c : rest)
    if (!o.is_zero(c)) return std::nullopt;
  return GenericSplit<E>{digits, h};
}

std::vector<int> proper_divisors(int d) {
  std::vector<int> out;
  for (int e = 2; e < d; ++e)
    if (d % e == 0) out.push_back(e);
  return out;
}

// Monic, origin-free normalization: (f - f(0)) / lc.
template <class Ops>
std::vector<typename Ops::E> normalized(const Ops& o, const std::vector<typename Ops::E>& f) {
  std::vector<typename Ops::E> out = f;
  out[0] = o.from(0);
  const auto lc = f.back();
  for (auto& c : out) c = o.div(c, lc);
  return out;
}

template <class Ops>
std::optional<std::pair<int, GenericSplit<typename Ops::E>>> first_split(const Ops& o, const std::vector<typename Ops::E>& f) {
  const int d = static_cast<int>(f.size()) - 1;
  const auto g = normalized(o, f);
  for (int e : proper_divisors(d))
    if (auto s = split_monic(o, g, e)) return std::make_pair(e, std::move(*s));
  return std::nullopt;
}

std::vector<BigComplex> to_complex(const UniPoly& f) {
  std::vector<BigComplex> out;
  for (const auto& c : f.coeffs()) out.emplace_back(BigFloat(c), BigFloat(0L));
  return out;
}

// Coefficient zero tests for field-valued polynomials: a nonzero image at a degree-one
// place proves nonvanishing; otherwise the exact value decides.
bool field_coefficient_zero(const FieldCoefficients& fc, std::size_t i, const std::vector<std::pair<modp::u64, modp::u64>>& places) {
  for (auto [p, r] : places)
    if (auto img = fc.image(p, r); img && (*img)[i] != 0) return false;
  return fc.values()[i].is_zero();
}

// Numeric magnitude scale of a coefficient vector.
BigFloat coefficient_scale(const std::vector<BigComplex>& c) {
  BigFloat s = 1;
  for (const auto& x : c) s = max(s, abs(x));
  return s;
}

std::vector<BigComplex> derivative(const std::vector<BigComplex>& c, int times) {
  std::vector<BigComplex> out = c;
  for (int t = 0; t < times; ++t) {
    std::vector<BigComplex> next;
    for (std::size_t k = 1; k < out.size(); ++k) next.push_back(out[k] * BigFloat(static_cast<long>(k)));
    out = std::move(next);
  }
  return out;
}

struct Critical {
  BigComplex location;
  int multiplicity;
};

// Critical points at the working precision: the stored ones refined as simple roots of
// C^(m), or found afresh when none are stored.
std::vector<Critical> critical_points_at(const ConservativePolynomial& c, const std::vector<BigComplex>& coeffs) {
  std::vector<Critical> out;
  if (c.critical_points.empty()) {
    auto roots = approximate_roots(derivative(coeffs, 1));
    const BigFloat tol = pow2(-static_cast<long>(working_precision() / 4)) * coefficient_scale(coeffs);
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (used[i]) continue;
      int m = 1;
      BigComplex sum = roots[i];
      for (std::size_t j = i + 1; j < roots.size(); ++j)
        if (!used[j] && abs(roots[j] - roots[i]) <= tol) {
          used[j] = true;
          sum += roots[j];
          ++m;
        }
      out.push_back({sum * (BigFloat(1L) / BigFloat(static_cast<long>(m))), m});
    }
  } else {
    for (const auto& cp : c.critical_points) out.push_back({BigComplex(cp.location.re, cp.location.im), cp.multiplicity});
  }
  for (auto& cp : out) {
    const auto dm = derivative(coeffs, cp.multiplicity);
    const auto dm1 = derivative(dm, 1);
    for (int it = 0; it < 100; ++it) {
      const BigComplex den = evaluate(dm1, cp.location);
      if (den.is_zero()) break;
      const BigComplex step = evaluate(dm, cp.location) / den;
      cp.location -= step;
      if (abs(step) <= pow2(-static_cast<long>(working_precision()) + 4) * max(BigFloat(1L), abs(cp.location))) break;
    }
  }
  return out;
}

// Coefficients of (C(a z + b) - b) / a.
std::vector<BigComplex> conjugate_coeffs(const std::vector<BigComplex>& c, const BigComplex& a, const BigComplex& b) {
  // Taylor shift by b, then scale.
  std::vector<BigComplex> t = c;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) t[j - 1] += t[j] * b;
  BigComplex apow(BigFloat(1L), BigFloat(0L));
  for (std::size_t k = 0; k < n; ++k) {
    t[k] *= apow;
    apow *= a;
  }
  t[0] -= b;
  const BigComplex ainv = BigComplex(BigFloat(1L), BigFloat(0L)) / a;
  for (auto& x : t) x *= ainv;
  return t;
}

std::vector<int> multiplicity_type(const std::vector<Critical>& cps) {
  std::vector<int> t;
  for (const auto& cp : cps) t.push_back(cp.multiplicity);
  std::sort(t.rbegin(), t.rend());
  return t;
}

enum class Verdict { Yes, No, Unsure };

Verdict equivalent_at(const ConservativePolynomial& c1, const ConservativePolynomial& c2, unsigned precision) {
  PrecisionScope scope(precision + 64);
  const auto a1 = c1.coefficients(), a2 = c2.coefficients();
  const int d = c1.degree;
  const auto cp1 = critical_points_at(c1, a1), cp2 = critical_points_at(c2, a2);
  if (multiplicity_type(cp1) != multiplicity_type(cp2)) return Verdict::No;
  const int m = multiplicity_type(cp1).front();
  const Critical* anchor = nullptr;
  for (const auto& cp : cp2)
    if (cp.multiplicity == m) {
      anchor = &cp;
      break;
    }
  const BigComplex ratio = a2.back() / a1.back();
  const BigComplex a0 = root(ratio, static_cast<unsigned>(d - 1));
  const BigFloat two_pi = BigFloat::pi() * BigFloat(2L);
  const BigFloat scale = coefficient_scale(a2);
  const BigFloat tight = pow2(-static_cast<long>(precision / 2)) * scale;
  const BigFloat loose = pow2(-static_cast<long>(precision / 8)) * scale;
  bool unsure = false;
  for (const auto& target : cp1) {
    if (target.multiplicity != m) continue;
    for (int j = 0; j < d - 1; ++j) {
      const BigComplex a = a0 * BigComplex::polar(BigFloat(1L), two_pi * BigFloat(static_cast<long>(j)) / BigFloat(static_cast<long>(d - 1)));
      const BigComplex b = target.location - a * anchor->location;
      const auto t = conjugate_coeffs(a1, a, b);
      BigFloat err = 0;
      for (std::size_t k = 0; k < t.size(); ++k) err = max(err, abs(t[k] - a2[k]));
      if (err <= tight) return Verdict::Yes;
      if (err <= loose) unsure = true;
    }
  }
  return unsure ? Verdict::Unsure : Verdict::No;
}

std::vector<BigComplex> embed_split(const std::vector<BigComplex>& digits, const BigComplex& lc, const BigComplex& c0) {
  std::vector<BigComplex> outer;
  for (const auto& g : digits) outer.push_back(g * lc);
  outer[0] += c0;
  return outer;
}

}  // namespace

Rational lambda_constant(int r, int s) {
  Rational c(factorial(static_cast<unsigned long>(r + s + 1)), factorial(static_cast<unsigned long>(r)) * factorial(static_cast<unsigned long>(s)));
  c.canonicalize();
  return c;
}

ConservativePolynomial star_polynomial(int d) {
  if (d < 2) throw ValidationError("star polynomial needs degree at least 2");
  std::vector<Rational> c(static_cast<std::size_t>(d) + 1, Rational(0));
  c.back() = 1;
  return ConservativePolynomial::from_rational(UniPoly(c), 212, "star " + std::to_string(d));
}

ConservativePolynomial reversed_star(int d) {
  if (d < 2) throw ValidationError("reversed star needs degree at least 2");
  std::vector<Rational> c(static_cast<std::size_t>(d) + 1, Rational(0));
  c.back() = 1;
  Rational lin(d, d - 1);
  lin.canonicalize();
  c[1] = lin;
  auto out = ConservativePolynomial::from_rational(UniPoly(c), 212, "fdz " + std::to_string(d));
  check_conservative(out);
  return out;
}

ConservativePolynomial lambda_rs(int r, int s) {
  if (r < 1 || s < 1) throw ValidationError("lambda_rs needs r, s >= 1");
  const Rational c = lambda_constant(r, s);
  std::vector<Rational> q(static_cast<std::size_t>(r + s + 2), Rational(0));
  for (int k = 0; k <= s; ++k) {
    Rational t = c * Rational(binomial(static_cast<unsigned long>(s), static_cast<unsigned long>(k))) / Rational(r + 1 + k);
    if (k % 2) t = -t;
    t.canonicalize();
    q[static_cast<std::size_t>(r + 1 + k)] = t;
  }
  return ConservativePolynomial::from_rational(UniPoly(q), 212, "lambda " + std::to_string(r) + "," + std::to_string(s));
}

RotationForm rotation_form(const ConservativePolynomial& c) {
  const int d = c.degree;
  std::vector<bool> zero(static_cast<std::size_t>(d) + 1, false);
  if (c.rational) {
    for (int i = 0; i <= d; ++i) zero[static_cast<std::size_t>(i)] = c.rational->coeff(i) == 0;
  } else if (c.exact) {
    const auto places = modp::degree_one_places(c.exact->field().modulus(), 3);
    for (int i = 0; i <= d; ++i) zero[static_cast<std::size_t>(i)] = field_coefficient_zero(*c.exact, static_cast<std::size_t>(i), places);
  } else {
    PrecisionScope scope(c.precision + 32);
    const auto a = c.coefficients();
    const BigFloat tol = pow2(-static_cast<long>(c.precision / 2)) * coefficient_scale(a);
    for (int i = 0; i <= d; ++i) zero[static_cast<std::size_t>(i)] = abs(a[static_cast<std::size_t>(i)]) <= tol;
  }
  if (!zero[0]) throw ValidationError("rotation form requires a normalized polynomial with C(0) = 0");
  int k = 0;
  for (int i = 2; i <= d; ++i)
    if (!zero[static_cast<std::size_t>(i)]) k = std::gcd(k, i - 1);
  RotationForm out;
  out.order = std::max(k, 1);
  if (c.rational) {
    std::vector<Rational> rest;
    for (int i = 1; i <= d; i += out.order) rest.push_back(c.rational->coeff(i));
    out.rest = UniPoly(rest);
  }
  return out;
}

int rotation_form_order(const ConservativePolynomial& c) { return rotation_form(c).order; }

std::optional<std::pair<UniPoly, UniPoly>> decompose_rational(const UniPoly& f) {
  if (f.degree() < 2) throw ValidationError("decomposition needs degree at least 2");
  const RationalOps o;
  auto s = first_split(o, f.coeffs());
  if (!s) return std::nullopt;
  std::vector<Rational> outer = s->second.outer;
  for (auto& g : outer) g *= f.leading();
  outer[0] += f.coeff(0);
  UniPoly g(outer), h(s->second.inner);
  if (compose(g, h) != f) throw InternalError("rational decomposition failed verification");
  return std::make_pair(g, h);
}

std::optional<Decomposition> decompose(const ConservativePolynomial& c) {
  if (c.degree < 2) throw ValidationError("decomposition needs degree at least 2");
  if (proper_divisors(c.degree).empty()) return std::nullopt;
  if (c.rational) {
    auto s = decompose_rational(*c.rational);
    if (!s) return std::nullopt;
    PrecisionScope scope(c.precision + 32);
    Decomposition out;
    out.outer = to_complex(s->first);
    out.inner = to_complex(s->second);
    out.outer_rational = s->first;
    out.inner_rational = s->second;
    out.exact = true;
    return out;
  }
  if (c.exact) {
    const auto& fc = *c.exact;
    // Decomposability survives reduction at a place where the data are integral and
    // p exceeds the degree, so one indecomposable image settles the question.
    for (auto [p, r] : modp::degree_one_places(fc.field().modulus(), 3)) {
      auto img = fc.image(p, r);
      if (!img || img->back() == 0 || p <= static_cast<modp::u64>(c.degree)) continue;
      if (!first_split(ModOps{p}, *img)) return std::nullopt;
    }
    const FieldOps o{&fc.field()};
    std::vector<NfElem> f;
    for (const auto& v : fc.values()) f.emplace_back(&fc.field(), v);
    auto s = first_split(o, f);
    if (!s) return std::nullopt;
    // Verify by substitution in the field.
    std::vector<NfElem> lhs{o.from(0)}, hp{o.from(1)};
    const NfElem lc = f.back();
    for (std::size_t i = 0; i < s->second.outer.size(); ++i) {
      std::vector<NfElem> term = hp;
      for (auto& x : term) x = x * s->second.outer[i] * lc;
      if (lhs.size() < term.size()) lhs.resize(term.size(), o.from(0));
      for (std::size_t j = 0; j < term.size(); ++j) lhs[j] = lhs[j] + term[j];
      hp = poly_mul(o, hp, s->second.inner);
    }
    lhs[0] = lhs[0] + f[0];
    for (std::size_t j = 0; j < f.size(); ++j)
      if (!(lhs[j] - f[j]).is_zero()) throw InternalError("field decomposition failed verification");
    PrecisionScope scope(c.precision + 32);
    Decomposition out;
    for (const auto& x : s->second.inner) out.inner.push_back(fc.field().embed(x.value(), c.theta));
    std::vector<BigComplex> digits;
    for (const auto& x : s->second.outer) digits.push_back(fc.field().embed(x.value(), c.theta));
    out.outer = embed_split(digits, fc.field().embed(lc.value(), c.theta), fc.field().embed(f[0].value(), c.theta));
    out.exact = true;
    return out;
  }
  PrecisionScope scope(c.precision + 32);
  const auto a = c.coefficients();
  const BigFloat scale = coefficient_scale(a);
  const ComplexOps tight{pow2(-static_cast<long>(c.precision / 2)) * scale};
  const ComplexOps loose{pow2(-static_cast<long>(c.precision / 8)) * scale};
  if (auto s = first_split(tight, a)) {
    Decomposition out;
    out.inner = s->second.inner;
    out.outer = embed_split(s->second.outer, a.back(), a[0]);
    return out;
  }
  if (first_split(loose, a)) throw PrecisionExhaustedError("decomposition undecided at this precision");
  return std::nullopt;
}

ConservativePolynomial affine_conjugate(const ConservativePolynomial& c, const Rational& a, const Rational& b) {
  if (a == 0) throw ValidationError("affine map must be invertible");
  if (!c.rational) {
    PrecisionScope scope(c.precision + 32);
    return affine_conjugate(c, BigComplex(BigFloat(a), BigFloat(0L)), BigComplex(BigFloat(b), BigFloat(0L)));
  }
  const UniPoly lin({b, a});
  UniPoly t = compose(*c.rational, lin) - UniPoly::constant(b);
  t *= Rational(1) / a;
  return ConservativePolynomial::from_rational(t, c.precision, c.source + " conjugated");
}

ConservativePolynomial affine_conjugate(const ConservativePolynomial& c, const BigComplex& a, const BigComplex& b) {
  if (a.is_zero()) throw ValidationError("affine map must be invertible");
  PrecisionScope scope(c.precision + 32);
  ConservativePolynomial out;
  out.degree = c.degree;
  out.precision = c.precision;
  out.source = c.source + " conjugated";
  out.coeffs = conjugate_coeffs(c.coefficients(), a, b);
  const BigComplex ainv = BigComplex(BigFloat(1L), BigFloat(0L)) / a;
  for (const auto& cp : c.critical_points) out.critical_points.push_back({(cp.location - b) * ainv, cp.multiplicity});
  return out;
}

bool are_equivalent(const ConservativePolynomial& c1, const ConservativePolynomial& c2, unsigned precision) {
  if (c1.degree != c2.degree) throw ValidationError("equivalence needs equal degrees");
  if (c1.critical_type() != c2.critical_type() && !c1.critical_points.empty() && !c2.critical_points.empty()) return false;
  if (c1.rational && c2.rational && *c1.rational == *c2.rational) return true;
  unsigned prec = std::min({precision, std::max(c1.precision, 64u), std::max(c2.precision, 64u)});
  for (int attempt = 0; attempt < 3; ++attempt, prec *= 2) {
    switch (equivalent_at(c1, c2, prec)) {
      case Verdict::Yes:
        return true;
      case Verdict::No:
        return false;
      case Verdict::Unsure:
        break;
    }
  }
  throw PrecisionExhaustedError("equivalence undecided after precision escalation");
}

}  // namespace conserv
