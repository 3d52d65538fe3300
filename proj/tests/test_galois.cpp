#include "doctest.h"

#include <functional>
#include <set>

#include "conserv/consys.hpp"
#include "conserv/dyntree.hpp"
#include "conserv/errors.hpp"
#include "conserv/galois.hpp"

using namespace conserv;

namespace {

Rational discriminant_of_quadratic(const UniPoly& f) { return f.coeff(1) * f.coeff(1) - 4 * f.coeff(2) * f.coeff(0); }

bool is_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

std::vector<TreeType> types_of_degree(int d, std::size_t max_parts) {
  std::vector<TreeType> out;
  std::function<void(TreeType, int, int)> gen = [&](TreeType cur, int rem, int top) {
    if (rem == 0) {
      if (cur.size() <= max_parts) out.push_back(cur);
      return;
    }
    for (int v = std::min(rem, top); v >= 1; --v) {
      auto next = cur;
      next.push_back(v);
      gen(next, rem - v, v);
    }
  };
  gen({}, d - 1, d - 1);
  return out;
}

}  // namespace

TEST_CASE("orbit of <3,1,1>") {
  const auto orbits = orbit_decomposition({3, 1, 1});
  REQUIRE(orbits.size() == 1);
  const auto& o = orbits[0];
  CHECK(o.orbit_length == 2);
  std::set<TreeCode> expected;
  for (const auto& t : trees_of_type({3, 1, 1})) expected.insert(canonical_code(t));
  CHECK(std::set<TreeCode>(o.trees.begin(), o.trees.end()) == expected);
  CHECK(o.witness_points.size() == 2);
  const auto field = field_of_moduli(o);
  CHECK(field.degree == 2);
  CHECK(field.minpoly.degree() == 2);
  CHECK(field.description == "Q(sqrt(41))");
  const Rational disc = discriminant_of_quadratic(field.minpoly);
  REQUIRE(disc.get_den() == 1);
  const Integer q = disc.get_num() / 41;
  CHECK(q * 41 == disc.get_num());
  CHECK(is_square(q));
  CHECK(check_invariants(orbits).ok());
}

TEST_CASE("orbits of <2,1,1>") {
  const auto orbits = orbit_decomposition({2, 1, 1});
  REQUIRE(orbits.size() == 2);
  std::multiset<int> auts;
  for (const auto& o : orbits) {
    CHECK(o.orbit_length == 1);
    CHECK(field_of_moduli(o).degree == 1);
    CHECK(field_of_moduli(o).description == "Q");
    auts.insert(aut_order(tree_from_code(o.trees[0])));
  }
  CHECK(auts == std::multiset<int>{1, 2});
  CHECK(check_invariants(orbits).ok());

  // Negative control: one artificial orbit holding both trees.
  GaloisOrbit mixed = orbits[0];
  mixed.trees = {orbits[0].trees[0], orbits[1].trees[0]};
  mixed.orbit_length = 2;
  const auto report = check_invariants({mixed});
  CHECK_FALSE(report.ok());
  CHECK(report.orbits_checked == 1);
  CHECK(report.violations.size() >= 1);
}

TEST_CASE("star and small orbits") {
  for (int m = 1; m <= 5; ++m) {
    const auto orbits = orbit_decomposition({m});
    REQUIRE(orbits.size() == 1);
    CHECK(orbits[0].orbit_length == 1);
    CHECK(orbits[0].trees[0] == canonical_code(white_star(m)));
    CHECK(field_of_moduli(orbits[0]).degree == 1);
  }
  // Three scaling-related solutions on a cubic component, one tree.
  const auto o21 = orbit_decomposition({2, 1});
  REQUIRE(o21.size() == 1);
  CHECK(o21[0].factor.degree() == 3);
  CHECK(o21[0].orbit_length == 1);
  CHECK(field_of_moduli(o21[0]).degree == 1);
}

TEST_CASE("property: orbits partition the trees of each type") {
  for (int d = 2; d <= 6; ++d)
    for (const auto& alpha : types_of_degree(d, 4)) {
      const auto orbits = orbit_decomposition(alpha);
      std::set<TreeCode> expected, seen;
      for (const auto& t : trees_of_type(alpha)) expected.insert(canonical_code(t));
      int total = 0;
      for (const auto& o : orbits) {
        CHECK(o.orbit_length == static_cast<int>(o.trees.size()));
        CHECK(o.orbit_length >= 1);
        total += o.orbit_length;
        for (const auto& code : o.trees) CHECK(seen.insert(code).second);
        const auto field = field_of_moduli(o);
        CHECK_MESSAGE(field.degree == o.orbit_length, type_to_string(alpha));
        CHECK(field.minpoly.degree() == o.orbit_length);
      }
      CHECK_MESSAGE(seen == expected, type_to_string(alpha));
      CHECK(total == static_cast<int>(expected.size()));
      const auto report = check_invariants(orbits);
      CHECK(report.ok());
      CHECK(report.orbits_checked == orbits.size());
    }
}

TEST_CASE("exact invariants agree with their numeric values") {
  for (const TreeType& alpha : std::vector<TreeType>{{3, 1, 1}, {2, 1, 1}, {2, 2}}) {
    const auto s = filter_degenerate(solve_type(alpha));
    const int d = s.system.degree;
    for (const auto& o : orbit_decomposition(s)) {
      PrecisionScope scope(s.precision + 32);
      const BigFloat tol = pow2(-static_cast<long>(s.precision / 2));
      const UniPoly ps = critical_power_sum(o, d - 1);
      for (int k = 1; k <= 2; ++k) {
        const UniPoly tr = multiplier_trace(o, k);
        for (const auto& pt : o.points) {
          const auto c = solution_polynomial(s, pt);
          BigComplex direct(BigFloat(0), BigFloat(0));
          for (const auto& fp : fixed_points(c, s.precision).points) {
            BigComplex t(BigFloat(1), BigFloat(0));
            for (int j = 0; j < k; ++j) t *= fp.multiplier;
            direct += t;
          }
          CHECK(abs(o.exact->field().embed(tr, pt.theta) - direct) < tol * (BigFloat(1) + abs(direct)));
        }
      }
      for (const auto& pt : o.points) {
        BigComplex direct(BigFloat(0), BigFloat(0));
        for (const auto& x : pt.coords) {
          BigComplex p(BigFloat(1), BigFloat(0));
          for (int k = 0; k < d - 1; ++k) p *= x;
          direct += p;
        }
        CHECK(abs(o.exact->field().embed(ps, pt.theta) - direct) < tol * (BigFloat(1) + abs(direct)));
      }
    }
  }
}

TEST_CASE("squarefree kernels") {
  CHECK(squarefree_kernel(Integer(41)) == 41);
  CHECK(squarefree_kernel(Integer(41 * 36)) == 41);
  CHECK(squarefree_kernel(Integer(-12)) == -3);
  CHECK(squarefree_kernel(Integer(1)) == 1);
  CHECK(squarefree_kernel(Integer(2 * 3 * 5 * 7 * 49)) == 210);
}
