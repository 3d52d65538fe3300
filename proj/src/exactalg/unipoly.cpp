#include "conserv/unipoly.hpp"

#include <algorithm>
#include <optional>

#include "conserv/errors.hpp"
#include "conserv/modular.hpp"

namespace conserv {

UniPoly::UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

UniPoly::UniPoly(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }

UniPoly UniPoly::constant(const Rational& c) { return UniPoly(std::vector<Rational>{c}); }

UniPoly UniPoly::monomial(const Rational& c, int k) {
  std::vector<Rational> v(static_cast<std::size_t>(k) + 1);
  v.back() = c;
  return UniPoly(std::move(v));
}

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational UniPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return Rational(0);
  return coeffs_[static_cast<std::size_t>(i)];
}

const Rational& UniPoly::leading() const {
  static const Rational zero(0);
  return coeffs_.empty() ? zero : coeffs_.back();
}

Rational UniPoly::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return UniPoly(std::move(out));
}

UniPoly& UniPoly::operator*=(const UniPoly& o) { return *this = *this * o; }

UniPoly& UniPoly::operator*=(const Rational& c) {
  if (c == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& x : coeffs_) x *= c;
  return *this;
}

UniPoly operator-(UniPoly a) {
  for (auto& x : a.coeffs_) x = -x;
  return a;
}

DivRem divrem(const UniPoly& f, const UniPoly& g) {
  if (g.is_zero()) throw ValidationError("polynomial division by zero");
  if (f.degree() < g.degree()) return {UniPoly{}, f};
  std::vector<Rational> rem = f.coeffs();
  const int dg = g.degree();
  std::vector<Rational> quo(static_cast<std::size_t>(f.degree() - dg + 1));
  const Rational inv_lc = 1 / g.leading();
  const auto& gc = g.coeffs();
  for (int k = f.degree() - dg; k >= 0; --k) {
    Rational q = rem[static_cast<std::size_t>(k + dg)] * inv_lc;
    quo[static_cast<std::size_t>(k)] = q;
    if (q == 0) continue;
    for (int j = 0; j <= dg; ++j) rem[static_cast<std::size_t>(k + j)] -= q * gc[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(dg));
  return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
}

UniPoly operator%(const UniPoly& f, const UniPoly& g) { return divrem(f, g).remainder; }

UniPoly derivative(const UniPoly& f) {
  if (f.degree() <= 0) return {};
  std::vector<Rational> out(static_cast<std::size_t>(f.degree()));
  for (int i = 1; i <= f.degree(); ++i) out[static_cast<std::size_t>(i - 1)] = f.coeffs()[static_cast<std::size_t>(i)] * i;
  return UniPoly(std::move(out));
}

UniPoly integral(const UniPoly& f) {
  if (f.is_zero()) return {};
  std::vector<Rational> out(f.coeffs().size() + 1);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) out[i + 1] = f.coeffs()[i] / Rational(static_cast<long>(i + 1));
  return UniPoly(std::move(out));
}

UniPoly monic(const UniPoly& f) {
  if (f.is_zero()) return f;
  return f * Rational(1 / f.leading());
}

namespace {

UniPoly gcd_prs(const UniPoly& f, const UniPoly& g) {
  UniPoly a = f, b = g;
  while (!b.is_zero()) {
    UniPoly r = a % b;
    a = std::move(b);
    b = primitive_part(r);
  }
  return monic(a);
}

// Multimodular gcd: images modulo word-size primes, Chinese remaindering of
// lc-scaled images, acceptance by exact division.
UniPoly gcd_modular(const UniPoly& f, const UniPoly& g) {
  const UniPoly a = primitive_part(f), b = primitive_part(g);
  const Integer la = a.leading().get_num(), lb = b.leading().get_num();
  Integer c;
  mpz_gcd(c.get_mpz_t(), la.get_mpz_t(), lb.get_mpz_t());
  modp::CrtAccumulator crt;
  int best_deg = std::min(a.degree(), b.degree()) + 1;
  std::optional<UniPoly> previous;
  modp::u64 p = 1ull << 61;
  for (int guard = 0; guard < 2000; ++guard) {
    p = modp::prev_prime(p);
    if (modp::reduce(la, p) == 0 || modp::reduce(lb, p) == 0) continue;
    auto ap = modp::reduce(a, p);
    auto bp = modp::reduce(b, p);
    modp::Poly gp = modp::monic(modp::gcd(*ap, *bp, p), p);
    const int dg = modp::degree(gp);
    if (dg == 0) return UniPoly::constant(1);
    if (dg > best_deg) continue;
    if (dg < best_deg) {
      best_deg = dg;
      crt = modp::CrtAccumulator();
      previous.reset();
    }
    crt.add(modp::scale(gp, modp::reduce(c, p), p), p);
    auto cand = crt.reconstruct();
    if (!cand) continue;
    UniPoly h = primitive_part(UniPoly(*cand));
    if (previous && *previous == h && (a % h).is_zero() && (b % h).is_zero()) return monic(h);
    previous = h;
  }
  return gcd_prs(f, g);
}

}  // namespace

UniPoly gcd(const UniPoly& f, const UniPoly& g) {
  if (f.is_zero()) return g.is_zero() ? UniPoly{} : monic(g);
  if (g.is_zero()) return monic(f);
  if (std::min(f.degree(), g.degree()) <= 4) return gcd_prs(f, g);
  return gcd_modular(f, g);
}

ExtendedGcd extended_gcd(const UniPoly& f, const UniPoly& g) {
  UniPoly r0 = f, r1 = g;
  UniPoly s0 = UniPoly::constant(1), s1;
  UniPoly t0, t1 = UniPoly::constant(1);
  while (!r1.is_zero()) {
    DivRem qr = divrem(r0, r1);
    UniPoly s2 = s0 - qr.quotient * s1;
    UniPoly t2 = t0 - qr.quotient * t1;
    r0 = std::move(r1);
    r1 = std::move(qr.remainder);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {UniPoly{}, UniPoly{}, UniPoly{}};
  Rational inv = 1 / r0.leading();
  return {r0 * inv, s0 * inv, t0 * inv};
}

UniPoly compose(const UniPoly& f, const UniPoly& g) {
  UniPoly acc;
  for (auto it = f.coeffs().rbegin(); it != f.coeffs().rend(); ++it) acc = acc * g + UniPoly::constant(*it);
  return acc;
}

UniPoly pow(const UniPoly& f, unsigned k) {
  UniPoly result = UniPoly::constant(1), base = f;
  while (k) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return result;
}

Rational content(const UniPoly& f) {
  if (f.is_zero()) return Rational(0);
  Integer num_gcd = 0, den_lcm = 1;
  for (const auto& c : f.coeffs()) {
    if (c == 0) continue;
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational c(num_gcd, den_lcm);
  c.canonicalize();
  if (f.leading() < 0) c = -c;
  return c;
}

UniPoly primitive_part(const UniPoly& f) {
  if (f.is_zero()) return f;
  return f * Rational(1 / content(f));
}

bool has_integer_coeffs(const UniPoly& f) {
  return std::all_of(f.coeffs().begin(), f.coeffs().end(), [](const Rational& c) { return c.get_den() == 1; });
}

UniPoly squarefree_part(const UniPoly& f) {
  if (f.is_zero()) throw ValidationError("squarefree part of the zero polynomial");
  if (f.degree() == 0) return UniPoly::constant(1);
  UniPoly g = gcd(f, derivative(f));
  return primitive_part(divrem(f, g).quotient);
}

std::vector<UniPoly> squarefree_decomposition(const UniPoly& f) {
  if (f.is_zero()) throw ValidationError("squarefree decomposition of the zero polynomial");
  std::vector<UniPoly> parts;
  if (f.degree() == 0) return parts;
  UniPoly a = monic(f);
  UniPoly b = derivative(a);
  UniPoly c = gcd(a, b);
  UniPoly w = divrem(a, c).quotient;
  UniPoly y = divrem(b, c).quotient;
  UniPoly z = y - derivative(w);
  while (w.degree() > 0) {
    UniPoly g = gcd(w, z);
    parts.push_back(g);
    w = divrem(w, g).quotient;
    y = divrem(z, g).quotient;
    z = y - derivative(w);
  }
  while (!parts.empty() && parts.back().degree() == 0) parts.pop_back();
  return parts;
}

Rational resultant(const UniPoly& f, const UniPoly& g) {
  if (f.is_zero() || g.is_zero()) return Rational(0);
  UniPoly a = f, b = g;
  Rational res(1);
  while (b.degree() > 0) {
    const int da = a.degree(), db = b.degree();
    UniPoly r = a % b;
    if (r.is_zero()) return Rational(0);
    const int dr = r.degree();
    // res(a, b) = (-1)^(da*db) lc(b)^(da - dr) res(b, r)
    Rational lc_pow(1);
    for (int i = 0; i < da - dr; ++i) lc_pow *= b.leading();
    if ((da * db) % 2) res = -res;
    res *= lc_pow;
    a = std::move(b);
    b = std::move(r);
  }
  // b is a nonzero constant: res(a, c) = c^deg(a)
  Rational c = b.coeff(0);
  for (int i = 0; i < a.degree(); ++i) res *= c;
  return res;
}

std::size_t height_bits(const UniPoly& f) {
  std::size_t bits = 0;
  const UniPoly g = primitive_part(f);
  for (const auto& c : g.coeffs())
    bits = std::max(bits, mpz_sizeinbase(c.get_num_mpz_t(), 2));
  return bits;
}

bool canonical_less(const UniPoly& a, const UniPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    const Rational ca = a.coeff(i), cb = b.coeff(i);
    if (ca != cb) return ca < cb;
  }
  return false;
}

std::string to_string(const UniPoly& f, const std::string& var) {
  if (f.is_zero()) return "0";
  std::string out;
  for (int k = f.degree(); k >= 0; --k) {
    const Rational& c = f.coeff(k);
    if (c == 0) continue;
    const bool neg = c < 0;
    const Rational a = neg ? Rational(-c) : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    const bool unit = a == 1;
    if (!unit || k == 0) out += a.get_str();
    if (k > 0) {
      if (!unit) out += "*";
      out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

}  // namespace conserv
