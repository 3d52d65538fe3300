#include "conserv/factor.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "conserv/errors.hpp"
#include "conserv/modular.hpp"

namespace conserv {

namespace {

using ZPoly = std::vector<Integer>;  // integer coefficients, lowest degree first

void ztrim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int zdeg(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }

void zmod(ZPoly& f, const Integer& m) {
  for (auto& c : f) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  }
  ztrim(f);
}

ZPoly zmul(const ZPoly& a, const ZPoly& b, const Integer& m) {
  if (a.empty() || b.empty()) return {};
  ZPoly out(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  zmod(out, m);
  return out;
}

ZPoly zadd(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly out(std::max(a.size(), b.size()), Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  zmod(out, m);
  return out;
}

ZPoly zsub(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly out(std::max(a.size(), b.size()), Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  zmod(out, m);
  return out;
}

ZPoly zscale(const ZPoly& a, const Integer& c, const Integer& m) {
  ZPoly out = a;
  for (auto& x : out) x *= c;
  zmod(out, m);
  return out;
}

// Division by a monic polynomial modulo m.
void zdivrem_monic(const ZPoly& f, const ZPoly& g, const Integer& m, ZPoly* q, ZPoly* r) {
  ZPoly rem = f;
  const int dg = zdeg(g);
  ZPoly quo(f.size() >= g.size() ? f.size() - g.size() + 1 : 0, Integer(0));
  for (int k = zdeg(rem) - dg; k >= 0; --k) {
    Integer c = rem[static_cast<std::size_t>(k + dg)];
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    quo[static_cast<std::size_t>(k)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= dg; ++j) mpz_submul(rem[static_cast<std::size_t>(k + j)].get_mpz_t(), c.get_mpz_t(), g[static_cast<std::size_t>(j)].get_mpz_t());
  }
  rem.resize(std::min(rem.size(), static_cast<std::size_t>(dg)));
  zmod(rem, m);
  zmod(quo, m);
  if (q) *q = std::move(quo);
  if (r) *r = std::move(rem);
}

ZPoly from_modp(const modp::Poly& f) {
  ZPoly out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = Integer(static_cast<unsigned long>(f[i]));
  return out;
}

ZPoly to_zpoly(const UniPoly& f) {
  ZPoly out(f.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.coeffs()[i].get_num();
  return out;
}

UniPoly symmetric_to_unipoly(const ZPoly& f, const Integer& m) {
  Integer half = m / 2;
  std::vector<Rational> c(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    Integer x = f[i];
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    if (x > half) x -= m;
    c[i] = Rational(x);
  }
  return UniPoly(std::move(c));
}

struct LiftedPair {
  ZPoly g, h, s, t;
};

// One quadratic Hensel step: f = g h mod m, s g + t h = 1 mod m, h monic; returns data mod m^2.
LiftedPair hensel_step(const ZPoly& f, const LiftedPair& in, const Integer& m2) {
  const ZPoly& g = in.g;
  const ZPoly& h = in.h;
  const ZPoly& s = in.s;
  const ZPoly& t = in.t;
  ZPoly e = zsub(f, zmul(g, h, m2), m2);
  ZPoly q, r;
  zdivrem_monic(zmul(s, e, m2), h, m2, &q, &r);
  ZPoly g2 = zadd(zadd(g, zmul(t, e, m2), m2), zmul(q, g, m2), m2);
  ZPoly h2 = zadd(h, r, m2);
  ZPoly one{Integer(1)};
  ZPoly b = zsub(zadd(zmul(s, g2, m2), zmul(t, h2, m2), m2), one, m2);
  ZPoly c, d;
  zdivrem_monic(zmul(s, b, m2), h2, m2, &c, &d);
  ZPoly s2 = zsub(s, d, m2);
  ZPoly t2 = zsub(zsub(t, zmul(t, b, m2), m2), zmul(c, g2, m2), m2);
  return {std::move(g2), std::move(h2), std::move(s2), std::move(t2)};
}

// Extended gcd over Z/p, returning s, t with s a + t b = 1.
void modp_bezout(const modp::Poly& a, const modp::Poly& b, modp::u64 p, modp::Poly* s_out, modp::Poly* t_out) {
  modp::Poly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
  while (!r1.empty()) {
    modp::Poly q, r;
    modp::divrem(r0, r1, p, &q, &r);
    modp::Poly s2 = modp::sub(s0, modp::mul(q, s1, p), p);
    modp::Poly t2 = modp::sub(t0, modp::mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (modp::degree(r0) != 0) throw InternalError("Hensel factors are not coprime modulo p");
  modp::u64 c = modp::inv(r0[0], p);
  *s_out = modp::scale(s0, c, p);
  *t_out = modp::scale(t0, c, p);
}

// Lift the monic modular factors of f (f = lc * prod factors mod p) to modulus p^(2^k) >= bound.
std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<modp::Poly>& factors, modp::u64 p, const Integer& target, Integer* modulus) {
  Integer m = Integer(static_cast<unsigned long>(p));
  while (m <= target) m *= m;
  *modulus = m;

  // Recursive binary lifting; factors[lo, hi) are monic and their product times lc equals target_poly mod p.
  std::function<void(const ZPoly&, std::size_t, std::size_t, std::vector<ZPoly>&)> lift =
      [&](const ZPoly& fpoly, std::size_t lo, std::size_t hi, std::vector<ZPoly>& out) {
        if (hi - lo == 1) {
          // fpoly is monic mod m here (only for nested calls) or carries lc at top level.
          Integer lc = fpoly.back();
          Integer inv_lc;
          if (lc % m == 1) {
            out.push_back(fpoly);
          } else {
            mpz_invert(inv_lc.get_mpz_t(), lc.get_mpz_t(), m.get_mpz_t());
            out.push_back(zscale(fpoly, inv_lc, m));
          }
          return;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        modp::Poly gp{1}, hp{1};
        for (std::size_t i = lo; i < mid; ++i) gp = modp::mul(gp, factors[i], p);
        for (std::size_t i = mid; i < hi; ++i) hp = modp::mul(hp, factors[i], p);
        modp::u64 lcp = modp::reduce(fpoly.back(), p);
        gp = modp::scale(gp, lcp, p);
        modp::Poly sp, tp;
        modp_bezout(gp, hp, p, &sp, &tp);
        LiftedPair cur{from_modp(gp), from_modp(hp), from_modp(sp), from_modp(tp)};
        Integer mod = Integer(static_cast<unsigned long>(p));
        while (mod < m) {
          Integer m2 = mod * mod;
          ZPoly fm = fpoly;
          zmod(fm, m2);
          cur = hensel_step(fm, cur, m2);
          mod = m2;
        }
        lift(cur.g, lo, mid, out);
        lift(cur.h, mid, hi, out);
      };
  std::vector<ZPoly> out;
  ZPoly fm = f;
  zmod(fm, m);
  lift(fm, 0, factors.size(), out);
  return out;
}

std::uint64_t poly_hash(const UniPoly& f) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& c : f.coeffs()) {
    std::string s = c.get_str();
    for (char ch : s) {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ull;
    }
    h ^= 0x9e;
    h *= 1099511628211ull;
  }
  return h;
}

Integer norm2_ceil(const UniPoly& f) {
  Integer sum = 0;
  for (const auto& c : f.coeffs()) sum += c.get_num() * c.get_num();
  Integer r;
  mpz_sqrt(r.get_mpz_t(), sum.get_mpz_t());
  return r + 1;
}

// Exact division test over Z: returns quotient if g divides f.
std::optional<UniPoly> divides(const UniPoly& f, const UniPoly& g) {
  DivRem qr = divrem(f, g);
  if (!qr.remainder.is_zero()) return std::nullopt;
  return qr.quotient;
}

std::set<int> subset_degree_sums(const std::vector<int>& degs) {
  std::set<int> sums{0};
  for (int d : degs) {
    std::set<int> next = sums;
    for (int s : sums) next.insert(s + d);
    sums = std::move(next);
  }
  return sums;
}

// Factor a squarefree primitive integer polynomial of degree >= 2.
std::vector<UniPoly> zassenhaus(const UniPoly& f) {
  const int n = f.degree();
  const Integer lc = f.leading().get_num();
  const std::uint64_t seed = poly_hash(f);
  UniPoly df = derivative(f);

  std::vector<modp::Poly> best;
  modp::u64 best_p = 0;
  std::set<int> allowed;
  bool have_allowed = false;
  int good = 0;
  for (modp::u64 p = 101; good < 8 && p < 200000; p = modp::next_prime(p)) {
    if (modp::reduce(lc, p) == 0) continue;
    auto fp = modp::reduce(f, p);
    auto dfp = modp::reduce(df, p);
    if (!fp || !dfp) continue;
    if (modp::degree(modp::gcd(*fp, *dfp, p)) != 0) continue;
    ++good;
    modp::Poly fm = modp::monic(*fp, p);
    auto dd = modp::distinct_degree(fm, p);
    std::vector<int> degs;
    for (auto& [g, i] : dd)
      for (int k = 0; k < modp::degree(g) / i; ++k) degs.push_back(i);
    std::set<int> sums = subset_degree_sums(degs);
    if (!have_allowed) {
      allowed = sums;
      have_allowed = true;
    } else {
      std::set<int> inter;
      std::set_intersection(allowed.begin(), allowed.end(), sums.begin(), sums.end(), std::inserter(inter, inter.begin()));
      allowed = std::move(inter);
    }
    if (allowed.size() == 2) return {f};  // only 0 and n remain
    if (best.empty() || degs.size() < best.size()) {
      best = modp::factor_squarefree(fm, p, seed);
      best_p = p;
    }
  }
  if (best.empty()) throw InternalError("no good prime found for factorization");
  if (best.size() == 1) return {f};

  // Factor coefficients of lc * g for any factor g of f are bounded by 2^n |f|_2 |lc|.
  Integer bound = norm2_ceil(f) * abs(lc);
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
  bound *= 2;
  Integer m;
  std::vector<ZPoly> lifted = hensel_lift(to_zpoly(f), best, best_p, bound, &m);

  std::vector<UniPoly> result;
  UniPoly rest = f;
  std::vector<ZPoly> pool = lifted;
  std::size_t s = 1;
  while (2 * s <= pool.size()) {
    bool found = false;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    const Integer rest_lc = rest.leading().get_num();
    const Integer rest_c0 = rest.coeff(0).get_num();
    for (;;) {
      int deg_sum = 0;
      for (auto i : idx) deg_sum += zdeg(pool[i]);
      if (allowed.count(deg_sum)) {
        // Constant-term test before forming the full product.
        Integer c0 = rest_lc;
        for (auto i : idx) {
          c0 *= pool[i][0];
          mpz_fdiv_r(c0.get_mpz_t(), c0.get_mpz_t(), m.get_mpz_t());
        }
        if (c0 > m / 2) c0 -= m;
        bool plausible = rest_c0 == 0 ? c0 == 0 : (c0 != 0 && rest_lc * rest_c0 % c0 == 0);
        if (plausible) {
          ZPoly prod{rest_lc};
          for (auto i : idx) prod = zmul(prod, pool[i], m);
          UniPoly cand = primitive_part(symmetric_to_unipoly(prod, m));
          if (cand.degree() > 0) {
            if (auto q = divides(rest, cand)) {
              result.push_back(cand);
              rest = primitive_part(*q);
              std::vector<ZPoly> remaining;
              for (std::size_t i = 0; i < pool.size(); ++i)
                if (std::find(idx.begin(), idx.end(), i) == idx.end()) remaining.push_back(pool[i]);
              pool = std::move(remaining);
              found = true;
              break;
            }
          }
        }
      }
      // next combination
      std::size_t k = s;
      while (k > 0 && idx[k - 1] == pool.size() - s + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  if (rest.degree() > 0) result.push_back(rest);
  return result;
}

}  // namespace

std::vector<UniPoly> irreducible_factors(const UniPoly& f) {
  if (f.is_zero()) throw ValidationError("factorization of the zero polynomial");
  UniPoly g = primitive_part(f);
  std::vector<UniPoly> out;
  if (g.degree() <= 0) return out;
  if (g.coeff(0) == 0) {
    out.push_back(UniPoly::x());
    g = primitive_part(divrem(g, UniPoly::x()).quotient);
  }
  if (g.degree() == 1) {
    out.push_back(g);
  } else if (g.degree() > 1) {
    auto parts = zassenhaus(g);
    out.insert(out.end(), parts.begin(), parts.end());
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

Factorization factor_rational(const UniPoly& f) {
  if (f.is_zero()) throw ValidationError("factorization of the zero polynomial");
  Factorization out;
  auto parts = squarefree_decomposition(f);
  UniPoly product = UniPoly::constant(1);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].degree() <= 0) continue;
    for (auto& g : irreducible_factors(parts[i])) {
      out.factors.push_back({g, static_cast<int>(i + 1)});
      product *= pow(g, static_cast<unsigned>(i + 1));
    }
  }
  std::sort(out.factors.begin(), out.factors.end(), [](const Factor& a, const Factor& b) {
    if (a.poly == b.poly) return a.multiplicity < b.multiplicity;
    return canonical_less(a.poly, b.poly);
  });
  out.unit = f.leading() / product.leading();
  return out;
}

bool is_irreducible(const UniPoly& f) {
  if (f.degree() <= 0) return false;
  auto parts = squarefree_decomposition(f);
  if (parts.size() != 1) return false;
  return irreducible_factors(f).size() == 1;
}

}  // namespace conserv
