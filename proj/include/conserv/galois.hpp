#pragma once

#include <memory>
#include <string>
#include <vector>

#include "conserv/consys.hpp"
#include "conserv/treecomb.hpp"

namespace conserv {

// One Galois orbit of trees: the trees realized by the points of an eliminant
// component. Components realizing the same tree set are merged.
struct GaloisOrbit {
  TreeType type;
  UniPoly factor;                        // first component realizing the orbit
  std::vector<UniPoly> merged_factors;   // every component realizing it
  std::vector<TreeCode> trees;           // sorted, distinct
  int orbit_length = 0;
  std::vector<SolutionPoint> witness_points;  // one per tree, parallel to trees

  // Data of the first component, used for field-of-moduli computations.
  std::vector<ValencyGroup> groups;
  std::shared_ptr<const FieldCoefficients> exact;
  std::vector<SolutionPoint> points;     // nondegenerate points of that component
  std::vector<TreeCode> point_trees;     // tree of each of those points
};

std::vector<GaloisOrbit> orbit_decomposition(const SolutionSet& s);
std::vector<GaloisOrbit> orbit_decomposition(const TreeType& alpha, unsigned precision = kDefaultPrecision);

struct FieldOfModuli {
  int degree = 0;
  UniPoly minpoly;        // primitive integer polynomial of the generating invariant
  std::string invariant;  // which invariant generated it
  std::string description;
};

// Invariants tried in order: the power sum of degree d-1 of the critical points,
// the ratio s_2 / s_1^2 of the first group of size >= 2, then traces of powers of
// the fixed-point multipliers. The first whose minimal polynomial has degree equal
// to the orbit length and separates the trees is used.
FieldOfModuli field_of_moduli(const GaloisOrbit& orbit, unsigned precision = kDefaultPrecision);

// Exact value of an invariant in the component field of an orbit.
UniPoly critical_power_sum(const GaloisOrbit& orbit, int k);
UniPoly multiplier_trace(const GaloisOrbit& orbit, int k);

struct InvariantReport {
  std::size_t orbits_checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Type and automorphism order must be constant on every orbit.
InvariantReport check_invariants(const std::vector<GaloisOrbit>& orbits);

// Squarefree part of a nonzero integer (sign kept); trial division with a perfect-square test on the cofactor.
Integer squarefree_kernel(const Integer& n);

}  // namespace conserv
