#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "conserv/modular.hpp"
#include "conserv/multipoly.hpp"

namespace conserv {

namespace gb {

inline constexpr std::size_t kMaxVars = 8;

struct Mono {
  std::uint16_t deg = 0;
  std::array<std::uint8_t, kMaxVars> e{};

  bool divides(const Mono& o) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  friend bool operator==(const Mono& a, const Mono& b) { return a.e == b.e; }
};

Mono lcm(const Mono& a, const Mono& b);
Mono quotient(const Mono& a, const Mono& b);  // requires b | a
Mono product(const Mono& a, const Mono& b);
bool coprime(const Mono& a, const Mono& b);
// Graded reverse lexicographic order, variable 0 largest.
bool grevlex_greater(const Mono& a, const Mono& b);

// Prime field element; the modulus is a thread-local set by ModulusScope.
struct Fp {
  std::uint64_t v = 0;
  static std::uint64_t& modulus();
};

class ModulusScope {
 public:
  explicit ModulusScope(std::uint64_t p) : saved_(Fp::modulus()) { Fp::modulus() = p; }
  ~ModulusScope() { Fp::modulus() = saved_; }
  ModulusScope(const ModulusScope&) = delete;
  ModulusScope& operator=(const ModulusScope&) = delete;

 private:
  std::uint64_t saved_;
};

template <class F>
struct Term {
  Mono m;
  F c;
};

// Terms sorted in decreasing grevlex order, no zero coefficients.
template <class F>
using Poly = std::vector<Term<F>>;

// Reduced Groebner basis (monic, sorted by leading monomial, increasing).
template <class F>
std::vector<Poly<F>> groebner(std::vector<Poly<F>> gens);

// Full normal form of f with respect to a Groebner basis.
template <class F>
Poly<F> normal_form(const Poly<F>& f, const std::vector<Poly<F>>& basis);

template <class F>
std::vector<Poly<F>> convert(const std::vector<MultiPoly>& polys, bool* ok);

// Monomials outside the leading ideal, sorted increasing; empty optional if positive dimensional.
std::vector<Mono> normal_set(const std::vector<Mono>& leading, std::size_t nvars, bool* zero_dim);

}  // namespace gb

// Rational univariate representation of a radical zero-dimensional system:
// the solutions are in bijection with the roots of the squarefree monic h via
// t = sum_j weights[j] * x_j, and x_j = numerators[j](t) / h'(t).
struct ShapeBasis {
  std::size_t nvars = 0;
  std::vector<Rational> weights;
  UniPoly h;
  std::vector<UniPoly> numerators;
  std::size_t quotient_dim = 0;
  bool radicalized = false;
  std::size_t primes_used = 0;
  bool exactly_verified = false;

  // x_j as a polynomial in t modulo h.
  UniPoly coordinate(std::size_t j) const;
};

// Modular reconstruction is always checked at three further primes. The exact
// substitution check runs for Exact, and for Automatic when the quotient is small.
enum class Verification { Automatic, Exact, Modular };
inline constexpr std::size_t kExactVerifyLimit = 96;

// Solve a zero-dimensional system. Throws PositiveDimensionError if the variety
// is not finite, RetryExhaustedError if no separating element is found.
ShapeBasis shape_basis(const std::vector<MultiPoly>& equations, int max_gamma = 8,
                       Verification mode = Verification::Automatic);

// Exact check that the shape parametrization satisfies every equation modulo h.
bool verify_shape(const ShapeBasis& s, const std::vector<MultiPoly>& equations);

}  // namespace conserv
