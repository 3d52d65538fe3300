#include "doctest.h"

#include <functional>
#include <set>

#include "conserv/consys.hpp"
#include "conserv/errors.hpp"
#include "conserv/roots.hpp"

using namespace conserv;

namespace {

// d z^alpha_1 prod (z - a_j)^alpha_j built directly in the variables (z, a_2, ...).
MultiPoly derivative_oracle(const TreeType& alpha) {
  const std::size_t n = alpha.size();
  int d = 1;
  for (int v : alpha) d += v;
  const MultiPoly z = MultiPoly::var(n, 0);
  MultiPoly f = MultiPoly::constant(n, d) * pow(z, static_cast<unsigned>(alpha[0]));
  for (std::size_t j = 1; j < n; ++j) f = f * pow(z - MultiPoly::var(n, j), static_cast<unsigned>(alpha[j]));
  return f;
}

std::vector<TreeType> types_up_to(int max_degree, std::size_t max_parts) {
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
  for (int d = 2; d <= max_degree; ++d) gen({}, d - 1, d - 1);
  return out;
}

}  // namespace

TEST_CASE("primitives") {
  const MultiPoly z1 = MultiPoly::var(1, 0);
  CHECK(build_primitive({1}) == z1 * z1);
  const MultiPoly z = MultiPoly::var(2, 0), a = MultiPoly::var(2, 1);
  CHECK(build_primitive({2, 1}) == pow(z, 4) - Rational(4, 3) * a * pow(z, 3));
  for (int d = 2; d <= 7; ++d) CHECK(build_primitive({d - 1}) == pow(z1, static_cast<unsigned>(d)));
  for (const auto& alpha : types_up_to(7, 4)) {
    const MultiPoly c = build_primitive(alpha);
    CHECK(derivative(c, 0) == derivative_oracle(alpha));
    CHECK(c.coeff_in(0, 0).is_zero());
    CHECK(c.coeff_in(0, edge_count_of(alpha) + 1) == MultiPoly::constant(alpha.size(), 1));
  }
}

TEST_CASE("systems") {
  CHECK(build_system({5}).equations.empty());
  const auto s = build_system({2, 1});
  REQUIRE(s.equations.size() == 1);
  const MultiPoly a = MultiPoly::var(1, 0);
  CHECK(s.equations[0] == Rational(-1, 3) * pow(a, 4) - a);
  const auto s3 = build_system({3, 1, 1});
  CHECK(s3.degree == 6);
  CHECK(s3.unknowns == 2);
  for (const auto& e : s3.equations) CHECK(e.total_degree() <= 6);
}

TEST_CASE("symmetric system groups equal valencies") {
  const auto s = build_symmetric_system({3, 1, 1});
  REQUIRE(s.groups.size() == 1);
  CHECK(s.groups[0].valency == 1);
  CHECK(s.groups[0].size == 2);
  CHECK(s.unknowns == 2);
  const auto t = build_symmetric_system({2, 2, 1});
  CHECK(t.groups.size() == 2);
}

TEST_CASE("solve <1> and stars") {
  const auto s = solve_type({1});
  REQUIRE(s.points.size() == 1);
  const auto c = solution_polynomial(s, s.points[0]);
  REQUIRE(c.rational);
  CHECK(*c.rational == UniPoly{0, 0, 1});
  const auto s4 = solve_type({4});
  REQUIRE(s4.points.size() == 1);
  CHECK(*solution_polynomial(s4, s4.points[0]).rational == UniPoly::monomial(1, 5));
}

TEST_CASE("solve <2,1>") {
  const auto s = solve_type({2, 1});
  CHECK(s.eliminant.degree() == 4);
  // x (x^3 + 3) up to the primitive element scaling: factors of degree 1 and 3.
  std::multiset<int> degs;
  for (const auto& f : s.factors()) degs.insert(f.degree());
  CHECK(degs == std::multiset<int>{1, 3});
  CHECK(s.nondegenerate_count() == 3);
  PrecisionScope scope(s.precision + 32);
  for (const auto& pt : s.points) {
    const BigComplex a = pt.coords[0];
    if (pt.degenerate) {
      CHECK(abs(a) < pow2(-100));
    } else {
      CHECK(abs(a * a * a + BigComplex(BigFloat(3))) < pow2(-100));
    }
  }
  const auto f = filter_degenerate(s);
  CHECK(f.points.size() == 3);
  REQUIRE(f.rejected.size() == 1);
  CHECK(f.rejected[0].merged_type == TreeType{3});
}

TEST_CASE("solve <3,1,1>") {
  const auto s = filter_degenerate(solve_type({3, 1, 1}));
  CHECK(static_cast<long>(s.nondegenerate_count()) == predicted_solution_count({3, 1, 1}));
  CHECK(s.eliminant.degree() <= s.bezout_bound);
  REQUIRE_FALSE(s.rejected.empty());
  for (const auto& pt : s.rejected) {
    CHECK(pt.merged_type == TreeType{4, 1});
    REQUIRE(pt.merged_tree);
    CHECK(tree_type(tree_from_code(*pt.merged_tree)) == TreeType{4, 1});
  }
  // Scale-fixed invariant of the pair: b = s_2 / s_1^2 solves 5b^2 - 9b + 2 on every point.
  PrecisionScope scope(s.precision + 32);
  for (const auto& pt : s.points) {
    const BigComplex b = pt.symmetric[1] / (pt.symmetric[0] * pt.symmetric[0]);
    const BigComplex v = BigComplex(BigFloat(5)) * b * b - BigComplex(BigFloat(9)) * b + BigComplex(BigFloat(2));
    CHECK(abs(v) < pow2(-90));
  }
}

TEST_CASE("solutions of <2,1,1> satisfy the scale-fixed system with C' = a z^2 (z^2 + 2z + b)") {
  const auto s = filter_degenerate(solve_type({2, 1, 1}));
  CHECK(s.nondegenerate_count() == 6);
  PrecisionScope scope(s.precision + 32);
  const BigComplex one(BigFloat(1));
  auto q = [](long n, long d) { return BigComplex(BigFloat(Rational(n, d))); };
  int symmetric = 0;
  for (const auto& pt : s.points) {
    const BigComplex& a2 = pt.coords[0];
    const BigComplex& a3 = pt.coords[1];
    // The half-turn symmetric tree has a_3 = -a_2; that normalization does not reach it.
    if (abs(a2 + a3) < pow2(-100)) {
      ++symmetric;
      continue;
    }
    // Conjugate by z -> mu z so the two simple critical points sum to -2.
    const BigComplex mu = -(a2 + a3) * q(1, 2);
    const BigComplex a = q(5, 1) * mu * mu * mu * mu;
    const BigComplex b = a2 * a3 / (mu * mu);
    const BigComplex e1 = q(14, 15) * a * b - q(4, 5) * a - one - q(2, 15) * a * b * b;
    const BigComplex e2 = q(11, 30) * a * b * b - q(2, 5) * a * b;
    CHECK(abs(e1) < pow2(-90));
    CHECK(abs(e2) < pow2(-90));
  }
  CHECK(symmetric == 2);
  for (const auto& pt : s.rejected) CHECK(pt.merged_type == TreeType{3, 1});
}

TEST_CASE("property: residuals and scaling symmetry") {
  for (const auto& alpha : types_up_to(5, 4)) {
    if (alpha.size() < 2) continue;
    const auto s = solve_type(alpha);
    const int d = s.system.degree;
    PrecisionScope scope(s.precision + 32);
    const BigFloat tol = pow2(-static_cast<long>(s.precision / 2));
    const BigComplex eps = BigComplex::polar(BigFloat(1), BigFloat(2) * BigFloat::pi() / BigFloat(d - 1));
    for (const auto& pt : s.points) {
      CHECK(residual(s, pt.coords) < tol);
      BigComplex e = eps;
      for (int k = 1; k < d - 1; ++k, e = e * eps) {
        std::vector<BigComplex> moved;
        for (const auto& x : pt.coords) moved.push_back(e * x);
        CHECK(residual(s, moved) < tol);
      }
    }
    CHECK(s.eliminant.degree() <= s.bezout_bound);
    // Scaling classes have size d - 1 exactly when the scaling acts freely.
    std::size_t covered = 0;
    for (const auto& cls : scale_classes(s)) covered += cls.size();
    CHECK(covered == s.nondegenerate_count());
  }
}

TEST_CASE("property: solution count matches the tree count") {
  for (const auto& alpha : types_up_to(6, 4)) {
    const auto s = solve_type(alpha);
    CHECK_MESSAGE(static_cast<long>(s.nondegenerate_count()) == predicted_solution_count(alpha), type_to_string(alpha));
  }
}

TEST_CASE("solution polynomials are conservative with the prescribed type") {
  const auto s = filter_degenerate(solve_type({2, 2, 1}));
  for (const auto& pt : s.points) {
    const auto c = solution_polynomial(s, pt);
    CHECK(c.critical_type() == TreeType{2, 2, 1});
    CHECK_NOTHROW(check_conservative(c));
  }
}

TEST_CASE("size limits") {
  CHECK_THROWS_AS(solve_type({1, 1, 1, 1, 1}), ResourceError);
  CHECK_THROWS_AS(solve_type({}), ValidationError);
}
