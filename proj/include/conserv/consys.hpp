#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conserv/bigfloat.hpp"
#include "conserv/conspoly.hpp"
#include "conserv/groebner.hpp"
#include "conserv/multipoly.hpp"
#include "conserv/numberfield.hpp"
#include "conserv/treecomb.hpp"

namespace conserv {

inline constexpr unsigned kDefaultPrecision = 212;
inline constexpr int kMaxUnknowns = 3;

struct ConservativeSystem {
  TreeType alpha;
  int degree = 0;
  std::size_t unknowns = 0;          // p - 1
  std::vector<MultiPoly> equations;  // E_j = C(a_j) - a_j in the variables a_2..a_p
  MultiPoly primitive;               // C in the variables (z, a_2, ..., a_p)
};

// C(z) = integral from 0 to z of d t^alpha_1 prod_j (t - a_j)^alpha_j.
MultiPoly build_primitive(const TreeType& alpha);
ConservativeSystem build_system(const TreeType& alpha);

// White vertices other than the origin, grouped by valency in decreasing order.
// Group g is encoded by Q_g(z) = z^k - s_1 z^(k-1) + s_2 z^(k-2) - ..., with the
// elementary symmetric functions s_i of its members as unknowns.
struct ValencyGroup {
  int valency = 0;
  int size = 0;
  std::size_t offset = 0;  // index of s_1 among the symmetric unknowns
};

struct SymmetricSystem {
  TreeType alpha;
  int degree = 0;
  std::vector<ValencyGroup> groups;
  std::size_t unknowns = 0;
  // Coefficients of (C(z) - z) mod Q_g, for every group g.
  std::vector<MultiPoly> equations;
  // Coefficients of C in the symmetric unknowns, lowest degree first.
  std::vector<MultiPoly> coefficients;
};

SymmetricSystem build_symmetric_system(const TreeType& alpha);

// Scale-fixed chart: C'(z) = L z^alpha_1 prod_g Q_g^valency, with the z^(k-1)
// coefficient of the first group's Q fixed to `pinned` and the leading factor L
// free. Variables: L, then the remaining symmetric unknowns.
struct ChartSystem {
  std::vector<MultiPoly> equations;
  std::vector<std::string> names;
};
ChartSystem build_chart_system(const TreeType& alpha, const Rational& pinned);

struct SolutionPoint {
  std::vector<BigComplex> coords;     // a_2..a_p, grouped by valency, each group sorted
  std::vector<BigComplex> symmetric;  // s-values of every group
  BigComplex theta;                   // primitive element value
  std::size_t component = 0;
  bool degenerate = false;
  // Coinciding coordinates; index 0 stands for the origin a_1 = 0, i >= 1 for coords[i-1].
  std::vector<std::pair<int, int>> collisions;
  TreeType merged_type;  // multiplicity type of C' at this point
  std::optional<TreeCode> merged_tree;
};

struct Component {
  UniPoly factor;  // irreducible, primitive
  std::shared_ptr<const NumberField> field;
  // s_j = G_j(t) / h'(t) over Q[t]/(factor), and the coefficients of C in terms of them.
  std::shared_ptr<const FieldCoefficients> exact;
  bool degenerate = false;
  bool origin_collision = false;
  bool cross_collision = false;
  bool within_collision = false;
  TreeType merged_type;

  // s-values as elements of Q[t]/(factor), computed on first use.
  const std::vector<UniPoly>& symmetric() const { return exact->parameters(); }
};

struct SolutionSet {
  ConservativeSystem system;
  SymmetricSystem symmetric_system;
  UniPoly eliminant;  // squarefree, primitive
  std::vector<Component> components;
  std::vector<SolutionPoint> points;
  std::vector<SolutionPoint> rejected;  // filled by filter_degenerate
  std::vector<Rational> weights;        // t = sum_j weights[j] * s_j
  unsigned precision = kDefaultPrecision;
  long bezout_bound = 0;

  std::vector<UniPoly> factors() const;
  std::size_t nondegenerate_count() const;
};

struct SolveOptions {
  int max_unknowns = kMaxUnknowns;
};

SolutionSet solve_type(const TreeType& alpha, unsigned precision = kDefaultPrecision, const SolveOptions& options = {});

// Moves degenerate points into `rejected` and annotates each with the tree of
// the merged type (by reconstruction from its polynomial).
SolutionSet filter_degenerate(const SolutionSet& s);

// The polynomial C of a solution point, with exact coefficients over its component field.
ConservativePolynomial solution_polynomial(const SolutionSet& s, const SolutionPoint& pt);

// Points related by a -> eps a with eps^(d-1) = 1, as index lists into s.points
// (nondegenerate points only).
std::vector<std::vector<std::size_t>> scale_classes(const SolutionSet& s);

// max_j |E_j(point)| at the working precision.
BigFloat residual(const SolutionSet& s, const std::vector<BigComplex>& coords);

// Count predicted from the trees of a type: sum of m1 (d-1) / |Aut|.
long predicted_solution_count(const TreeType& alpha, int cap = kDefaultEdgeCap);

std::vector<std::string> symmetric_names(const SymmetricSystem& s);

}  // namespace conserv
