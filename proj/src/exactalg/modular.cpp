#include "conserv/modular.hpp"

#include <algorithm>
#include <random>

#include "conserv/errors.hpp"

namespace conserv::modp {

u64 pow(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1u) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1u;
  }
  return r;
}

u64 inv(u64 a, u64 p) {
  if (a % p == 0) throw InternalError("inverse of zero modulo p");
  return pow(a, p - 2, p);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1u) == 0) {
    d >>= 1u;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 next_prime(u64 n) {
  for (u64 c = n + 1;; ++c)
    if (is_prime(c)) return c;
}

u64 prev_prime(u64 n) {
  for (u64 c = n - 1; c >= 2; --c)
    if (is_prime(c)) return c;
  throw InternalError("no prime below bound");
}

u64 reduce(const Integer& z, u64 p) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
  return r.get_ui();
}

std::optional<u64> reduce(const Rational& q, u64 p) {
  u64 den = reduce(q.get_den(), p);
  if (den == 0) return std::nullopt;
  return mul(reduce(q.get_num(), p), inv(den, p), p);
}

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly add(const Poly& a, const Poly& b, u64 p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = modp::add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0, p);
  trim(out);
  return out;
}

Poly sub(const Poly& a, const Poly& b, u64 p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = modp::sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0, p);
  trim(out);
  return out;
}

Poly mul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  std::vector<u128> acc(a.size() + b.size() - 1, 0);
  // Accumulate in 128 bits, folding before overflow.
  const u128 limit = ~static_cast<u128>(0) - static_cast<u128>(p - 1) * (p - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      u128& slot = acc[i + j];
      slot += static_cast<u128>(a[i]) * b[j];
      if (slot >= limit) slot %= p;
    }
  }
  Poly out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<u64>(acc[i] % p);
  trim(out);
  return out;
}

Poly scale(const Poly& a, u64 c, u64 p) {
  Poly out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mul(a[i], c, p);
  trim(out);
  return out;
}

void divrem(const Poly& f, const Poly& g, u64 p, Poly* q, Poly* r) {
  if (g.empty()) throw InternalError("division by zero polynomial modulo p");
  Poly rem = f;
  const int dg = degree(g);
  const u64 ilc = inv(g.back(), p);
  Poly quo(f.size() >= g.size() ? f.size() - g.size() + 1 : 0, 0);
  for (int k = degree(rem) - dg; k >= 0; --k) {
    u64 c = mul(rem[static_cast<std::size_t>(k + dg)], ilc, p);
    quo[static_cast<std::size_t>(k)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= dg; ++j) {
      u64& slot = rem[static_cast<std::size_t>(k + j)];
      slot = modp::sub(slot, mul(c, g[static_cast<std::size_t>(j)], p), p);
    }
  }
  rem.resize(std::min(rem.size(), static_cast<std::size_t>(dg)));
  trim(rem);
  trim(quo);
  if (q) *q = std::move(quo);
  if (r) *r = std::move(rem);
}

Poly rem(const Poly& f, const Poly& g, u64 p) {
  Poly r;
  divrem(f, g, p, nullptr, &r);
  return r;
}

Poly monic(const Poly& f, u64 p) {
  if (f.empty()) return f;
  return scale(f, inv(f.back(), p), p);
}

Poly gcd(const Poly& a, const Poly& b, u64 p) {
  Poly x = a, y = b;
  while (!y.empty()) {
    Poly r = rem(x, y, p);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x, p);
}

Poly derivative(const Poly& f, u64 p) {
  if (f.size() <= 1) return {};
  Poly out(f.size() - 1);
  for (std::size_t i = 1; i < f.size(); ++i) out[i - 1] = mul(f[i], i % p, p);
  trim(out);
  return out;
}

Poly powmod(const Poly& base, const Integer& e, const Poly& mod, u64 p) {
  Poly result{1 % p};
  trim(result);
  Poly b = rem(base, mod, p);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = rem(mul(result, result, p), mod, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, b, p), mod, p);
  }
  return result;
}

std::optional<Poly> reduce(const UniPoly& f, u64 p) {
  Poly out(f.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto c = reduce(f.coeffs()[i], p);
    if (!c) return std::nullopt;
    out[i] = *c;
  }
  trim(out);
  return out;
}

std::vector<std::pair<Poly, int>> distinct_degree(const Poly& f, u64 p) {
  std::vector<std::pair<Poly, int>> out;
  Poly rest = f;
  const Poly x{0, 1};
  Poly h = x;
  for (int i = 1; 2 * i <= degree(rest); ++i) {
    h = powmod(h, Integer(p), rest, p);
    Poly g = gcd(rest, sub(h, x, p), p);
    if (degree(g) > 0) {
      out.emplace_back(g, i);
      Poly q;
      divrem(rest, g, p, &q, nullptr);
      rest = std::move(q);
      h = rem(h, rest, p);
    }
  }
  if (degree(rest) > 0) out.emplace_back(rest, degree(rest));
  return out;
}

std::vector<Poly> equal_degree(const Poly& f, int i, u64 p, std::uint64_t seed) {
  if (degree(f) == i) return {f};
  std::mt19937_64 rng(seed);
  Integer pi;
  mpz_ui_pow_ui(pi.get_mpz_t(), p, static_cast<unsigned long>(i));
  Integer e = (pi - 1) / 2;
  std::vector<Poly> pending{f}, done;
  while (!pending.empty()) {
    Poly g = pending.back();
    pending.pop_back();
    if (degree(g) == i) {
      done.push_back(g);
      continue;
    }
    for (;;) {
      Poly a(static_cast<std::size_t>(degree(g)));
      for (auto& c : a) c = rng() % p;
      trim(a);
      if (degree(a) < 1) continue;
      Poly b = powmod(a, e, g, p);
      Poly d = gcd(g, sub(b, Poly{1}, p), p);
      if (degree(d) > 0 && degree(d) < degree(g)) {
        Poly q;
        divrem(g, d, p, &q, nullptr);
        pending.push_back(d);
        pending.push_back(monic(q, p));
        break;
      }
    }
  }
  return done;
}

std::vector<Poly> factor_squarefree(const Poly& f, u64 p, std::uint64_t seed) {
  std::vector<Poly> out;
  for (auto& [g, i] : distinct_degree(f, p)) {
    auto parts = equal_degree(g, i, p, seed + static_cast<std::uint64_t>(i));
    out.insert(out.end(), parts.begin(), parts.end());
  }
  std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

u64 evaluate(const Poly& f, u64 x, u64 p) {
  u64 acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = add(mul(acc, x, p), *it, p);
  return acc;
}

std::vector<std::pair<u64, u64>> degree_one_places(const UniPoly& f, std::size_t count, int tries, u64 start) {
  std::vector<std::pair<u64, u64>> out;
  if (f.degree() < 1) return out;
  u64 p = start;
  for (int guard = 0; guard < tries && out.size() < count; ++guard) {
    p = prev_prime(p);
    auto fp = reduce(conserv::monic(f), p);
    if (!fp || degree(*fp) != f.degree()) continue;
    if (degree(*fp) == 1) {
      out.emplace_back(p, sub(0, (*fp)[0], p));
      continue;
    }
    const Poly x{0, 1};
    Poly g = monic(gcd(sub(powmod(x, Integer(static_cast<unsigned long>(p)), *fp, p), x, p), *fp, p), p);
    if (degree(g) < 1) continue;
    const Poly lin = degree(g) == 1 ? g : equal_degree(g, 1, p, 0x9e3779b97f4a7c15ull ^ p).front();
    out.emplace_back(p, sub(0, lin[0], p));
  }
  return out;
}

std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m) {
  Integer bound;
  mpz_fdiv_q_2exp(bound.get_mpz_t(), m.get_mpz_t(), 1);
  mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());
  Integer r0 = m, r1 = a % m;
  if (r1 < 0) r1 += m;
  Integer t0 = 0, t1 = 1;
  while (r1 > bound) {
    Integer q = r0 / r1;
    Integer r2 = r0 - q * r1;
    Integer t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (abs(t1) > bound || t1 == 0) return std::nullopt;
  Integer g = gcd(r1, t1);
  if (g != 1) return std::nullopt;
  Rational q(r1, t1);
  q.canonicalize();
  return q;
}

void CrtAccumulator::add(const std::vector<u64>& residues, u64 p) {
  if (count_ == 0) {
    values_.assign(residues.size(), Integer(0));
    for (std::size_t i = 0; i < residues.size(); ++i) values_[i] = Integer(static_cast<unsigned long>(residues[i]));
    modulus_ = Integer(static_cast<unsigned long>(p));
    count_ = 1;
    return;
  }
  if (residues.size() != values_.size()) throw InternalError("CRT vector length mismatch");
  // x = v + M * ((r - v) * M^{-1} mod p)
  const u64 minv = inv(reduce(modulus_, p), p);
  for (std::size_t i = 0; i < residues.size(); ++i) {
    u64 v = reduce(values_[i], p);
    u64 k = mul(modp::sub(residues[i], v, p), minv, p);
    values_[i] += modulus_ * Integer(static_cast<unsigned long>(k));
  }
  modulus_ *= Integer(static_cast<unsigned long>(p));
  ++count_;
}

std::optional<std::vector<Rational>> CrtAccumulator::reconstruct() const {
  std::vector<Rational> out;
  out.reserve(values_.size());
  // Entries usually share a denominator; try the running one before a full reconstruction.
  Integer den = 1, half, bound, w;
  mpz_fdiv_q_2exp(half.get_mpz_t(), modulus_.get_mpz_t(), 1);
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  for (const auto& v : values_) {
    w = v * den;
    mpz_fdiv_r(w.get_mpz_t(), w.get_mpz_t(), modulus_.get_mpz_t());
    if (w > half) w -= modulus_;
    if (abs(w) <= bound) {
      Rational q(w, den);
      q.canonicalize();
      out.push_back(std::move(q));
      continue;
    }
    auto q = rational_reconstruct(w, modulus_);
    if (!q) return std::nullopt;
    Rational r = *q / Rational(den);
    r.canonicalize();
    den *= q->get_den();
    if (den > bound) return std::nullopt;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace conserv::modp
