#pragma once

#include <vector>

#include "conserv/unipoly.hpp"

namespace conserv {

struct Factor {
  UniPoly poly;  // primitive integer polynomial, positive leading coefficient
  int multiplicity = 1;
};

struct Factorization {
  Rational unit;  // f = unit * prod poly^multiplicity
  std::vector<Factor> factors;
};

// Complete factorization over the rationals; factors sorted by canonical_less.
Factorization factor_rational(const UniPoly& f);

// Irreducible factors of a squarefree polynomial, each primitive, sorted.
std::vector<UniPoly> irreducible_factors(const UniPoly& f);

bool is_irreducible(const UniPoly& f);

}  // namespace conserv
