#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "conserv/unipoly.hpp"

namespace conserv::modp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 add(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
inline u64 sub(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
inline u64 mul(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
u64 pow(u64 a, u64 e, u64 p);
// Inverse of a nonzero residue modulo a prime.
u64 inv(u64 a, u64 p);

bool is_prime(u64 n);
u64 next_prime(u64 n);
u64 prev_prime(u64 n);

// Image of a rational modulo p; nullopt if p divides the denominator.
std::optional<u64> reduce(const Rational& q, u64 p);
u64 reduce(const Integer& z, u64 p);

// Dense polynomials over Z/p, lowest degree first, no trailing zeros.
using Poly = std::vector<u64>;

void trim(Poly& f);
inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }
Poly add(const Poly& a, const Poly& b, u64 p);
Poly sub(const Poly& a, const Poly& b, u64 p);
Poly mul(const Poly& a, const Poly& b, u64 p);
Poly scale(const Poly& a, u64 c, u64 p);
void divrem(const Poly& f, const Poly& g, u64 p, Poly* q, Poly* r);
Poly rem(const Poly& f, const Poly& g, u64 p);
Poly monic(const Poly& f, u64 p);
Poly gcd(const Poly& a, const Poly& b, u64 p);
Poly derivative(const Poly& f, u64 p);
Poly powmod(const Poly& base, const Integer& e, const Poly& mod, u64 p);
std::optional<Poly> reduce(const UniPoly& f, u64 p);

// Distinct-degree factorization of a squarefree monic f: pairs (product of all degree-i factors, i).
std::vector<std::pair<Poly, int>> distinct_degree(const Poly& f, u64 p);
// Equal-degree splitting into monic irreducible factors of degree i (p odd).
std::vector<Poly> equal_degree(const Poly& f, int i, u64 p, std::uint64_t seed);
// Full factorization of a squarefree monic polynomial, sorted.
std::vector<Poly> factor_squarefree(const Poly& f, u64 p, std::uint64_t seed);

// Value of f at x modulo p.
u64 evaluate(const Poly& f, u64 x, u64 p);

// Degree-one places of Q[t]/(f): pairs (p, r) with p prime below start, f p-integral
// of full degree mod p and f(r) = 0 mod p. At most count places, scanning at most tries primes.
std::vector<std::pair<u64, u64>> degree_one_places(const UniPoly& f, std::size_t count, int tries = 200, u64 start = 1ull << 60);

// Smallest-height rational congruent to a modulo m with |num|, den <= sqrt(m/2).
std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m);

// Incremental Chinese remaindering of residue vectors.
class CrtAccumulator {
 public:
  void add(const std::vector<u64>& residues, u64 p);
  const Integer& modulus() const { return modulus_; }
  const std::vector<Integer>& values() const { return values_; }
  std::size_t primes_used() const { return count_; }
  // Rational reconstruction of every entry, nullopt if any entry fails.
  std::optional<std::vector<Rational>> reconstruct() const;

 private:
  Integer modulus_ = 1;
  std::vector<Integer> values_;
  std::size_t count_ = 0;
};

}  // namespace conserv::modp
