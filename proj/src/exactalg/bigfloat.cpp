#include "conserv/bigfloat.hpp"

#include <memory>
#include <utility>

namespace conserv {

namespace {
thread_local unsigned g_precision = 128;
}

unsigned working_precision() { return g_precision; }

PrecisionScope::PrecisionScope(unsigned bits) : saved_(g_precision) { g_precision = bits < 16 ? 16 : bits; }
PrecisionScope::~PrecisionScope() { g_precision = saved_; }

BigFloat::BigFloat() {
  mpfr_init2(v_, g_precision);
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(double x) {
  mpfr_init2(v_, g_precision);
  mpfr_set_d(v_, x, MPFR_RNDN);
}

BigFloat::BigFloat(long x) {
  mpfr_init2(v_, g_precision);
  mpfr_set_si(v_, x, MPFR_RNDN);
}

BigFloat::BigFloat(const Rational& q) {
  mpfr_init2(v_, g_precision);
  mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const Integer& z) {
  mpfr_init2(v_, g_precision);
  mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& o) {
  mpfr_init2(v_, g_precision);
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    if (mpfr_get_prec(v_) != g_precision) mpfr_set_prec(v_, g_precision);
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

Rational BigFloat::to_rational() const {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), v_);
  return q;
}

long BigFloat::exponent() const {
  if (mpfr_zero_p(v_)) return -(1L << 40);
  return mpfr_get_exp(v_);
}

std::string BigFloat::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

BigFloat BigFloat::pi() {
  BigFloat r;
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator-=(const BigFloat& o) {
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(const BigFloat& o) {
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator/=(const BigFloat& o) {
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat operator-(const BigFloat& a) {
  BigFloat r;
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

#define CONSERV_UNARY(name, fn)            \
  BigFloat name(const BigFloat& x) {       \
    BigFloat r;                            \
    fn(r.get(), x.get(), MPFR_RNDN);       \
    return r;                              \
  }
CONSERV_UNARY(abs, mpfr_abs)
CONSERV_UNARY(sqrt, mpfr_sqrt)
CONSERV_UNARY(sin, mpfr_sin)
CONSERV_UNARY(cos, mpfr_cos)
CONSERV_UNARY(log, mpfr_log)
CONSERV_UNARY(exp, mpfr_exp)
#undef CONSERV_UNARY

BigFloat atan2(const BigFloat& y, const BigFloat& x) {
  BigFloat r;
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

BigFloat ldexp(const BigFloat& x, long e) {
  BigFloat r;
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

BigFloat hypot(const BigFloat& x, const BigFloat& y) {
  BigFloat r;
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }

BigFloat pow2(long e) {
  BigFloat r(1L);
  mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
  return r;
}

BigComplex BigComplex::polar(const BigFloat& r, const BigFloat& theta) { return {r * cos(theta), r * sin(theta)}; }

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
BigComplex& BigComplex::operator-=(const BigComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
BigComplex& BigComplex::operator*=(const BigComplex& o) {
  BigFloat r = re * o.re - im * o.im;
  BigFloat i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}
BigComplex& BigComplex::operator*=(const BigFloat& s) {
  re *= s;
  im *= s;
  return *this;
}
BigComplex& BigComplex::operator/=(const BigComplex& o) {
  BigFloat den = o.re * o.re + o.im * o.im;
  BigFloat r = (re * o.re + im * o.im) / den;
  BigFloat i = (im * o.re - re * o.im) / den;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

BigFloat abs(const BigComplex& z) { return hypot(z.re, z.im); }
BigFloat norm(const BigComplex& z) { return z.re * z.re + z.im * z.im; }
BigFloat arg(const BigComplex& z) { return atan2(z.im, z.re); }
BigComplex conj(const BigComplex& z) { return {z.re, -z.im}; }

BigComplex root(const BigComplex& z, unsigned k) {
  if (z.is_zero()) return z;
  BigFloat r = abs(z);
  BigFloat rk;
  mpfr_rootn_ui(rk.get(), r.get(), k, MPFR_RNDN);
  return BigComplex::polar(rk, arg(z) / BigFloat(static_cast<long>(k)));
}

}  // namespace conserv
