#include "conserv/numberfield.hpp"

#include <optional>

#include "conserv/errors.hpp"
#include "conserv/factor.hpp"
#include "conserv/modular.hpp"

namespace conserv {

NumberField::NumberField(UniPoly modulus, bool check_irreducible) : h_(monic(modulus)) {
  if (h_.degree() < 1) throw ValidationError("number field modulus must have positive degree");
  if (check_irreducible && !is_irreducible(h_)) throw ValidationError("number field modulus is not irreducible");
  // H(psi) = L^(n-1) * P(psi / L) for the primitive form P with leading coefficient L.
  const UniPoly prim = primitive_part(h_);
  const int n = prim.degree();
  lead_ = prim.leading().get_num();
  big_h_.assign(static_cast<std::size_t>(n), Integer(0));
  Integer lpow = 1;
  for (int i = n - 1; i >= 0; --i) {
    big_h_[static_cast<std::size_t>(i)] = prim.coeff(i).get_num() * lpow;
    lpow *= lead_;
  }
}

void NumberField::reduce_num(std::vector<Integer>& num) const {
  const std::size_t n = big_h_.size();
  for (std::size_t k = num.size(); k-- > n;) {
    const Integer c = num[k];
    if (c != 0)
      for (std::size_t j = 0; j < n; ++j) mpz_submul(num[k - n + j].get_mpz_t(), c.get_mpz_t(), big_h_[j].get_mpz_t());
  }
  if (num.size() > n) num.resize(n);
  while (!num.empty() && num.back() == 0) num.pop_back();
}

void NumberField::normalize(Elem& a) const {
  reduce_num(a.num);
  if (a.num.empty()) {
    a.den = 1;
    return;
  }
  Integer g = a.den;
  for (const auto& c : a.num) {
    if (g == 1) break;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  if (a.den < 0) g = -abs(g);
  if (g != 1 && g != 0) {
    for (auto& c : a.num) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(a.den.get_mpz_t(), a.den.get_mpz_t(), g.get_mpz_t());
  }
}

NumberField::Elem NumberField::from_poly(const UniPoly& a_in) const {
  const UniPoly a = a_in.degree() >= h_.degree() ? a_in % h_ : a_in;
  Elem e;
  if (a.is_zero()) return e;
  // a(t) = sum a_i psi^i / L^i; scale by L^(deg a) and the denominators.
  const int d = a.degree();
  Integer den_lcm = 1;
  for (const auto& c : a.coeffs()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Integer> lpow(static_cast<std::size_t>(d) + 1);
  lpow[0] = 1;
  for (int i = 1; i <= d; ++i) lpow[static_cast<std::size_t>(i)] = lpow[static_cast<std::size_t>(i - 1)] * lead_;
  e.num.resize(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i <= d; ++i) {
    const Rational& c = a.coeffs()[static_cast<std::size_t>(i)];
    e.num[static_cast<std::size_t>(i)] = c.get_num() * (den_lcm / c.get_den()) * lpow[static_cast<std::size_t>(d - i)];
  }
  e.den = den_lcm * lpow[static_cast<std::size_t>(d)];
  normalize(e);
  return e;
}

UniPoly NumberField::to_poly(const Elem& a) const {
  std::vector<Rational> c(a.num.size());
  Integer lpow = 1;
  for (std::size_t i = 0; i < a.num.size(); ++i) {
    Rational q(a.num[i] * lpow, a.den);
    q.canonicalize();
    c[i] = q;
    lpow *= lead_;
  }
  return UniPoly(std::move(c));
}

NumberField::Elem NumberField::from_rational(const Rational& c) const {
  Elem e;
  if (c == 0) return e;
  e.num = {c.get_num()};
  e.den = c.get_den();
  return e;
}

NumberField::Elem NumberField::add(const Elem& a, const Elem& b) const {
  if (a.num.empty()) return b;
  if (b.num.empty()) return a;
  Elem r;
  r.num.assign(std::max(a.num.size(), b.num.size()), Integer(0));
  if (a.den == b.den) {
    for (std::size_t i = 0; i < a.num.size(); ++i) r.num[i] += a.num[i];
    for (std::size_t i = 0; i < b.num.size(); ++i) r.num[i] += b.num[i];
    r.den = a.den;
  } else {
    for (std::size_t i = 0; i < a.num.size(); ++i) r.num[i] += a.num[i] * b.den;
    for (std::size_t i = 0; i < b.num.size(); ++i) r.num[i] += b.num[i] * a.den;
    r.den = a.den * b.den;
  }
  while (!r.num.empty() && r.num.back() == 0) r.num.pop_back();
  normalize(r);
  return r;
}

NumberField::Elem NumberField::neg(const Elem& a) const {
  Elem r = a;
  for (auto& c : r.num) c = -c;
  return r;
}

NumberField::Elem NumberField::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

NumberField::Elem NumberField::mul(const Elem& a, const Elem& b) const {
  Elem r;
  if (a.num.empty() || b.num.empty()) return r;
  r.num.assign(a.num.size() + b.num.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.num.size(); ++i) {
    if (a.num[i] == 0) continue;
    for (std::size_t j = 0; j < b.num.size(); ++j) mpz_addmul(r.num[i + j].get_mpz_t(), a.num[i].get_mpz_t(), b.num[j].get_mpz_t());
  }
  r.den = a.den * b.den;
  normalize(r);
  return r;
}

NumberField::Elem NumberField::scale(const Elem& a, const Rational& c) const {
  if (c == 0) return {};
  Elem r = a;
  for (auto& x : r.num) x *= c.get_num();
  r.den *= c.get_den();
  normalize(r);
  return r;
}

NumberField::Elem NumberField::pow(const Elem& a, unsigned k) const {
  Elem result = from_rational(1), base = a;
  while (k) {
    if (k & 1u) result = mul(result, base);
    k >>= 1u;
    if (k) base = mul(base, base);
  }
  return result;
}

namespace {

// Inverse of a modulo h over Z/p by the extended Euclidean algorithm; nullopt if not coprime.
std::optional<modp::Poly> inverse_mod(const modp::Poly& a, const modp::Poly& h, modp::u64 p) {
  modp::Poly r0 = h, r1 = modp::rem(a, h, p), t0, t1{1};
  while (!r1.empty()) {
    modp::Poly q, r;
    modp::divrem(r0, r1, p, &q, &r);
    modp::Poly t2 = modp::sub(t0, modp::mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (modp::degree(r0) != 0) return std::nullopt;
  return modp::scale(t0, modp::inv(r0[0], p), p);
}

}  // namespace

NumberField::Elem NumberField::inverse(const Elem& a) const {
  if (a.num.empty()) throw ValidationError("division by zero in a number field");
  // Multimodular: invert modulo primes, reconstruct the rational coefficients, verify exactly.
  const UniPoly ap = to_poly(a);
  const int n = h_.degree();
  const Elem one = from_rational(1);
  modp::CrtAccumulator crt;
  std::size_t next_try = 1;
  int failures = 0;
  modp::u64 p = 1ull << 62;
  for (int guard = 0; guard < 100000; ++guard) {
    p = modp::prev_prime(p);
    auto hp = modp::reduce(h_, p);
    auto xp = modp::reduce(ap, p);
    if (!hp || !xp || modp::degree(*hp) != n) continue;
    auto ip = inverse_mod(*xp, *hp, p);
    if (!ip) {
      // Unlucky primes are rare; persistent failure means a is a zero divisor.
      if (++failures > 8) throw ValidationError("element is not invertible");
      continue;
    }
    ip->resize(static_cast<std::size_t>(n), 0);
    crt.add(*ip, p);
    if (crt.primes_used() < next_try) continue;
    next_try = crt.primes_used() + std::max<std::size_t>(1, crt.primes_used() / 4);
    auto cand = crt.reconstruct();
    if (!cand) continue;
    Elem b = from_poly(UniPoly(*cand));
    if (is_zero(sub(mul(a, b), one))) return b;
  }
  throw ResourceError("number field inverse did not stabilize");
}

UniPoly NumberField::reduce(const UniPoly& a) const {
  if (a.degree() < h_.degree()) return a;
  return a % h_;
}

UniPoly NumberField::mul(const UniPoly& a, const UniPoly& b) const { return to_poly(mul(from_poly(a), from_poly(b))); }

UniPoly NumberField::pow(const UniPoly& a, unsigned k) const { return to_poly(pow(from_poly(a), k)); }

UniPoly NumberField::inverse(const UniPoly& a) const { return to_poly(inverse(from_poly(a))); }

BigComplex NumberField::refine_root(const BigComplex& theta) const {
  const long target = -static_cast<long>(working_precision()) + 8;
  BigComplex t(theta.re, theta.im);
  for (int it = 0; it < 64; ++it) {
    BigComplex v, dv;
    for (auto c = h_.coeffs().rbegin(); c != h_.coeffs().rend(); ++c) {
      dv = dv * t + v;
      v = v * t + BigComplex(BigFloat(*c));
    }
    if (dv.is_zero()) break;
    const BigComplex step = v / dv;
    t -= step;
    if (step.is_zero() || abs(step) <= pow2(target) * max(BigFloat(1L), abs(t))) break;
  }
  return t;
}

BigComplex NumberField::embed(const UniPoly& a, const BigComplex& theta) const {
  const unsigned outer = working_precision();
  const UniPoly r = reduce(a);
  std::size_t height = 0;
  for (const auto& c : r.coeffs())
    height = std::max(height, mpz_sizeinbase(c.get_num_mpz_t(), 2) + mpz_sizeinbase(c.get_den_mpz_t(), 2));
  PrecisionScope scope(outer + static_cast<unsigned>(height) + 32);
  const BigComplex t = refine_root(theta);
  BigComplex acc;
  for (auto it = r.coeffs().rbegin(); it != r.coeffs().rend(); ++it) {
    acc *= t;
    acc.re += BigFloat(*it);
  }
  PrecisionScope back(outer);
  return BigComplex(BigFloat(acc.re), BigFloat(acc.im));
}

namespace {

using u64 = modp::u64;

// Characteristic polynomial of a square matrix over Z/p via Hessenberg reduction.
std::vector<u64> hessenberg_charpoly(std::vector<std::vector<u64>> h, u64 p) {
  const std::size_t n = h.size();
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t i = j + 1;
    while (i < n && h[i][j] == 0) ++i;
    if (i == n) continue;
    if (i != j + 1) {
      std::swap(h[i], h[j + 1]);
      for (std::size_t r = 0; r < n; ++r) std::swap(h[r][i], h[r][j + 1]);
    }
    u64 inv = modp::inv(h[j + 1][j], p);
    for (std::size_t k = j + 2; k < n; ++k) {
      if (h[k][j] == 0) continue;
      u64 u = modp::mul(h[k][j], inv, p);
      for (std::size_t c = 0; c < n; ++c) h[k][c] = modp::sub(h[k][c], modp::mul(u, h[j + 1][c], p), p);
      for (std::size_t r = 0; r < n; ++r) h[r][j + 1] = modp::add(h[r][j + 1], modp::mul(u, h[r][k], p), p);
    }
  }
  std::vector<modp::Poly> polys(n + 1);
  polys[0] = {1};
  for (std::size_t m = 1; m <= n; ++m) {
    modp::Poly lin{modp::sub(0, h[m - 1][m - 1], p), 1};
    modp::Poly cur = modp::mul(lin, polys[m - 1], p);
    u64 prod = 1;
    for (std::size_t i = 1; i < m; ++i) {
      prod = modp::mul(prod, h[m - i][m - i - 1], p);
      u64 coef = modp::mul(h[m - i - 1][m - 1], prod, p);
      if (coef) cur = modp::sub(cur, modp::scale(polys[m - i - 1], coef, p), p);
    }
    polys[m] = std::move(cur);
  }
  modp::Poly out = polys[n];
  out.resize(n + 1, 0);
  return out;
}

}  // namespace

UniPoly NumberField::charpoly(const UniPoly& a_in) const {
  const UniPoly a = reduce(a_in);
  const int n = h_.degree();
  modp::CrtAccumulator crt;
  std::size_t next_try = 1;
  u64 p = 1ull << 62;
  for (int guard = 0; guard < 4000; ++guard) {
    p = modp::prev_prime(p);
    auto hp = modp::reduce(h_, p);
    auto ap = modp::reduce(a, p);
    if (!hp || !ap || modp::degree(*hp) != n) continue;
    // Column i holds a * t^i mod h.
    std::vector<std::vector<u64>> mat(static_cast<std::size_t>(n), std::vector<u64>(static_cast<std::size_t>(n), 0));
    modp::Poly col = modp::rem(*ap, *hp, p);
    for (int i = 0; i < n; ++i) {
      for (std::size_t r = 0; r < col.size(); ++r) mat[r][static_cast<std::size_t>(i)] = col[r];
      col.insert(col.begin(), 0);
      col = modp::rem(col, *hp, p);
    }
    std::vector<u64> cp = hessenberg_charpoly(std::move(mat), p);
    cp.pop_back();  // monic leading term
    if (crt.primes_used() >= next_try) {
      if (auto cand = crt.reconstruct()) {
        bool same = true;
        for (std::size_t i = 0; i < cand->size() && same; ++i) {
          auto r = modp::reduce((*cand)[i], p);
          same = r && *r == cp[i];
        }
        if (same) {
          std::vector<Rational> coeffs = *cand;
          coeffs.emplace_back(1);
          UniPoly chi(std::move(coeffs));
          // Exact verification: chi(a) = 0 in the algebra.
          const Elem ae = from_poly(a);
          Elem acc;
          for (int k = chi.degree(); k >= 0; --k) acc = add(mul(acc, ae), from_rational(chi.coeff(k)));
          if (is_zero(acc)) return chi;
        }
      }
      next_try = crt.primes_used() + std::max<std::size_t>(1, crt.primes_used() / 2);
    }
    crt.add(cp, p);
  }
  throw ResourceError("characteristic polynomial reconstruction did not stabilize");
}

UniPoly NumberField::minpoly(const UniPoly& a) const { return squarefree_part(charpoly(a)); }

}  // namespace conserv
