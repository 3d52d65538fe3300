#include "doctest.h"

#include <numbers>

#include "conserv/consys.hpp"
#include "conserv/dyntree.hpp"
#include "conserv/errors.hpp"
#include "conserv/families.hpp"
#include "support.hpp"

using namespace conserv;

namespace {

ConservativePolynomial rational_poly(std::vector<Rational> c) { return ConservativePolynomial::from_rational(UniPoly(std::move(c))); }

// Whether f = g(h) for some g, by the h-adic expansion: every digit must be constant.
bool is_polynomial_in(const UniPoly& f, const UniPoly& h) {
  UniPoly rest = f;
  while (!rest.is_zero()) {
    const auto qr = divrem(rest, h);
    if (qr.remainder.degree() > 0) return false;
    rest = qr.quotient;
  }
  return true;
}

// Exhaustive right factors of C = c int t^r (1-t)^s: h' divides C', so h' = z^i (1-z)^j.
bool lambda_decomposable(int r, int s, const UniPoly& f) {
  const int d = r + s + 1;
  for (int k = 2; k < d; ++k) {
    if (d % k != 0) continue;
    for (int i = 0; i <= std::min(r, k - 1); ++i) {
      const int j = k - 1 - i;
      if (j > s) continue;
      const UniPoly hp = pow(UniPoly::x(), static_cast<unsigned>(i)) * pow(UniPoly{1, -1}, static_cast<unsigned>(j));
      if (is_polynomial_in(f, integral(hp))) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("stars") {
  CHECK(*star_polynomial(2).rational == UniPoly{0, 0, 1});
  CHECK(star_polynomial(5).critical_type() == TreeType{4});
  CHECK_THROWS_AS(star_polynomial(1), ValidationError);
}

TEST_CASE("reversed stars") {
  CHECK(*reversed_star(2).rational == UniPoly{0, 2, 1});
  const auto f2 = *reversed_star(2).rational;
  CHECK(f2(Rational(-1)) == -1);
  CHECK(*reversed_star(6).rational == UniPoly{0, Rational(6, 5), 0, 0, 0, 0, 1});
  for (int d = 2; d <= 12; ++d) {
    const UniPoly f = *reversed_star(d).rational;
    // Every critical point is fixed: f(z) - z vanishes modulo f'.
    CHECK(((f - UniPoly::x()) % derivative(f)).is_zero());
    CHECK(reversed_star(d).critical_type() == TreeType(static_cast<std::size_t>(d - 1), 1));
  }
}

TEST_CASE("lambda family") {
  CHECK(*lambda_rs(1, 1).rational == UniPoly{0, 0, 3, -2});
  CHECK(*lambda_rs(2, 1).rational == UniPoly{0, 0, 0, 4, -3});
  for (int r = 1; r <= 8; ++r)
    for (int s = 1; s <= 8; ++s) {
      const UniPoly f = *lambda_rs(r, s).rational;
      const Rational c = lambda_constant(r, s);
      CHECK(c * Rational(factorial(static_cast<unsigned long>(r)) * factorial(static_cast<unsigned long>(s))) ==
            Rational(factorial(static_cast<unsigned long>(r + s + 1))));
      CHECK(f(Rational(1)) == 1);
      CHECK(f(Rational(0)) == 0);
      for (int k = 0; k <= s; ++k) {
        Rational term = c * Rational(binomial(static_cast<unsigned long>(s), static_cast<unsigned long>(k))) / Rational(r + 1 + k);
        if (k % 2) term = -term;
        CHECK(f.coeff(r + 1 + k) == term);
      }
    }
}

TEST_CASE("rotation forms") {
  const auto odd = rational_poly({0, 0, 0, Rational(5, 2), 0, Rational(-3, 2)});
  const auto rf = rotation_form(odd);
  CHECK(rf.order == 2);
  REQUIRE(rf.rest);
  CHECK(*rf.rest == UniPoly{0, Rational(5, 2), Rational(-3, 2)});
  for (int d = 2; d <= 8; ++d) CHECK(rotation_form_order(star_polynomial(d)) == d - 1);
  CHECK(rotation_form_order(rational_poly({0, 0, 0, Rational(55, 9), Rational(605, 72), Rational(121, 36)})) == 1);
  CHECK_THROWS_AS(rotation_form_order(rational_poly({1, 0, 1})), ValidationError);
}

TEST_CASE("property: rotation order is the symmetry order about the origin vertex") {
  for (const TreeType& alpha : std::vector<TreeType>{{2, 1, 1}, {3, 1, 1}, {2, 2}, {1, 1}, {2, 1, 1, 1}, {3, 1}, {4}, {3, 2}}) {
    const auto s = filter_degenerate(solve_type(alpha));
    for (const auto& pt : s.points) {
      const auto c = solution_polynomial(s, pt);
      const auto rec = reconstruct(c, s.precision);
      int origin = -1;
      for (std::size_t i = 0; i < rec.fixed.points.size(); ++i)
        if (abs(rec.fixed.points[i].location).to_double() < 1e-30) origin = static_cast<int>(i);
      REQUIRE(origin >= 0);
      const int k = rotation_form_order(c);
      CHECK(k == center_order(rec.tree, origin));
      if (center_order(rec.tree, origin) > 1) CHECK(k == aut_order(rec.tree));
    }
  }
}

TEST_CASE("decompositions of powers") {
  for (int d : {4, 6, 8, 9}) {
    const auto dec = decompose(star_polynomial(d));
    REQUIRE(dec);
    CHECK(dec->exact);
    REQUIRE(dec->outer_rational);
    CHECK(dec->outer_rational->degree() >= 2);
    CHECK(dec->inner_rational->degree() >= 2);
    CHECK(compose(*dec->outer_rational, *dec->inner_rational) == UniPoly::monomial(1, d));
  }
  for (int d : {2, 3, 5, 7}) CHECK_FALSE(decompose(star_polynomial(d)));
  CHECK_FALSE(decompose(rational_poly({0, 0, 0, Rational(5, 2), 0, Rational(-3, 2)})));
}

TEST_CASE("property: decompose_rational finds planted splits") {
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Rational> g{0}, h{0};
    const int e = testsupport::uniform(2, 3), k = testsupport::uniform(2, 3);
    for (int i = 1; i <= e; ++i) g.emplace_back(testsupport::uniform(-5, 5));
    for (int i = 1; i < k; ++i) h.emplace_back(testsupport::uniform(-5, 5));
    if (g.back() == 0) g.back() = 1;
    h.emplace_back(1);
    const UniPoly f = compose(UniPoly(g), UniPoly(h));
    const auto split = decompose_rational(f);
    REQUIRE(split);
    CHECK(compose(split->first, split->second) == f);
    CHECK(split->first.degree() * split->second.degree() == f.degree());
    CHECK(split->second.degree() >= 2);
  }
}

TEST_CASE("lambda polynomials are indecomposable") {
  for (int r = 1; r <= 7; ++r)
    for (int s = 1; s + r <= 7; ++s) {
      const auto c = lambda_rs(r, s);
      const bool oracle = lambda_decomposable(r, s, *c.rational);
      CHECK_FALSE(oracle);
      CHECK(decompose(c).has_value() == oracle);
    }
}

TEST_CASE("equivalence") {
  const auto odd = rational_poly({0, 0, 0, Rational(5, 2), 0, Rational(-3, 2)});
  const auto asym = rational_poly({0, 0, 0, Rational(55, 9), Rational(605, 72), Rational(121, 36)});
  CHECK(are_equivalent(odd, odd));
  CHECK_FALSE(are_equivalent(odd, asym));
  for (int d = 3; d <= 6; ++d) CHECK_FALSE(are_equivalent(star_polynomial(d), reversed_star(d)));
  // Conjugation by a root of unity of order d - 1.
  const auto c = lambda_rs(2, 3);
  PrecisionScope scope(300);
  const BigComplex eps = BigComplex::polar(BigFloat(1), BigFloat(2) * BigFloat::pi() / BigFloat(5));
  CHECK(are_equivalent(c, affine_conjugate(c, eps, BigComplex(BigFloat(0)))));
  CHECK(are_equivalent(c, affine_conjugate(c, Rational(-3, 2), Rational(7, 5))));
  CHECK_FALSE(are_equivalent(c, lambda_rs(1, 4)));
  CHECK(are_equivalent(lambda_rs(2, 3), lambda_rs(3, 2)));

  const auto s = filter_degenerate(solve_type({2, 1, 1}));
  int matches_odd = 0, matches_asym = 0;
  for (const auto& pt : s.points) {
    const auto sol = solution_polynomial(s, pt);
    const bool a = are_equivalent(sol, odd), b = are_equivalent(sol, asym);
    CHECK(a != b);
    matches_odd += a;
    matches_asym += b;
  }
  CHECK(matches_odd == 2);
  CHECK(matches_asym == 4);
}

TEST_CASE("property: equivalence is an equivalence relation on fixtures") {
  std::vector<ConservativePolynomial> fixtures;
  const auto s = filter_degenerate(solve_type({2, 1, 1}));
  for (std::size_t i = 0; i < s.points.size(); i += 2) fixtures.push_back(solution_polynomial(s, s.points[i]));
  const std::size_t base = fixtures.size();
  for (std::size_t i = 0; i < base; ++i) {
    Rational a(testsupport::uniform(1, 4) * (testsupport::uniform(0, 1) ? 1 : -1), testsupport::uniform(1, 3));
    a.canonicalize();
    fixtures.push_back(affine_conjugate(fixtures[i], a, Rational(testsupport::uniform(-3, 3))));
  }
  const std::size_t n = fixtures.size();
  std::vector<std::vector<bool>> eq(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) eq[i][j] = are_equivalent(fixtures[i], fixtures[j]);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(eq[i][i]);
    if (i >= base) CHECK(eq[i][i - base]);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(eq[i][j] == eq[j][i]);
      for (std::size_t k = 0; k < n; ++k)
        if (eq[i][j] && eq[j][k]) CHECK(eq[i][k]);
    }
  }
}

TEST_CASE("lambda polynomials appear among solved types") {
  for (int r = 1; r <= 3; ++r)
    for (int s = 1; s <= 3; ++s) {
      const auto s_set = filter_degenerate(solve_type({std::max(r, s), std::min(r, s)}));
      const auto target = lambda_rs(r, s);
      bool found = false;
      for (const auto& pt : s_set.points) found = found || are_equivalent(solution_polynomial(s_set, pt), target);
      CHECK(found);
    }
}
