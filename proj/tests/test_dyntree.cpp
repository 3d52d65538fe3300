#include "doctest.h"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <set>

#include "conserv/consys.hpp"
#include "conserv/dyntree.hpp"
#include "conserv/errors.hpp"
#include "conserv/families.hpp"

using namespace conserv;
using cd = std::complex<double>;

namespace {

ConservativePolynomial from_coeffs(std::vector<Rational> c) { return ConservativePolynomial::from_rational(UniPoly(std::move(c))); }

ConservativePolynomial odd_quintic() { return from_coeffs({0, 0, 0, Rational(5, 2), 0, Rational(-3, 2)}); }
ConservativePolynomial asymmetric_quintic() { return from_coeffs({0, 0, 0, Rational(55, 9), Rational(605, 72), Rational(121, 36)}); }

double segment_distance(cd p, cd a, cd b) {
  const cd ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0 ? std::real((p - a) * std::conj(ab)) / len2 : 0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

double polyline_distance(cd p, const std::vector<cd>& line) {
  double best = 1e300;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) best = std::min(best, segment_distance(p, line[i], line[i + 1]));
  return best;
}

cd eval(const ConservativePolynomial& c, cd z) {
  PrecisionScope scope(80);
  return c(BigComplex(z)).to_complex();
}

void check_invariant_ray(const ConservativePolynomial& c, const InternalRay& ray) {
  const cd zeta = ray.polyline.front();
  for (std::size_t i = 1; i + 1 < ray.polyline.size(); ++i) {
    const cd x = ray.polyline[i];
    const cd y = eval(c, x);
    CHECK(polyline_distance(y, ray.polyline) <= 1e-3 * std::abs(y - zeta) + 1e-9);
  }
}

}  // namespace

TEST_CASE("fixed points of the odd quintic") {
  const auto c = odd_quintic();
  const auto fp = fixed_points(c, 212);
  REQUIRE(fp.points.size() == 5);
  CHECK(fp.superattracting() == 3);
  CHECK(fp.repelling() == 2);
  const double r = std::sqrt(2.0 / 3.0);
  std::map<double, const FixedPoint*> by_re;
  for (const auto& f : fp.points) by_re[f.location.re.to_double()] = &f;
  std::vector<double> xs;
  for (auto& [x, f] : by_re) {
    xs.push_back(x);
    CHECK(std::abs(f->location.im.to_double()) < 1e-30);
  }
  CHECK(xs[0] == doctest::Approx(-1).epsilon(1e-15));
  CHECK(xs[1] == doctest::Approx(-r).epsilon(1e-15));
  CHECK(std::abs(xs[2]) < 1e-30);
  CHECK(xs[3] == doctest::Approx(r).epsilon(1e-15));
  CHECK(xs[4] == doctest::Approx(1).epsilon(1e-15));
  for (auto& [x, f] : by_re) {
    if (std::abs(std::abs(x) - r) < 1e-9) {
      CHECK(f->kind == FixedClass::Repelling);
      CHECK(f->multiplier.re.to_double() == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    } else {
      CHECK(f->kind == FixedClass::Superattracting);
    }
  }
}

TEST_CASE("fixed points of the reversed star") {
  const auto c = reversed_star(6);
  const auto fp = fixed_points(c, 212);
  CHECK(fp.superattracting() == 5);
  CHECK(fp.repelling() == 1);
  for (const auto& f : fp.points) {
    const cd z = f.location.to_complex();
    if (f.kind == FixedClass::Repelling) {
      CHECK(std::abs(z) < 1e-30);
      CHECK(f.multiplier.to_complex().real() == doctest::Approx(1.2).epsilon(1e-15));
    } else {
      // Fifth roots of -1/5.
      CHECK(std::abs(std::pow(z, 5) + 0.2) < 1e-14);
    }
  }
}

TEST_CASE("rays of z^5 are radial") {
  const auto c = star_polynomial(5);
  const auto fp = fixed_points(c, 212);
  int white = -1;
  for (std::size_t i = 0; i < fp.points.size(); ++i)
    if (fp.points[i].kind == FixedClass::Superattracting && std::abs(fp.points[i].location.to_complex()) < 1e-20) white = static_cast<int>(i);
  REQUIRE(white >= 0);
  std::vector<cd> landings;
  for (int k = 0; k < 4; ++k) {
    const auto ray = trace_ray(c, fp, white, k);
    REQUIRE(ray.landing >= 0);
    const cd land = fp.points[static_cast<std::size_t>(ray.landing)].location.to_complex();
    CHECK(std::abs(std::pow(land, 4) - 1.0) < 1e-12);
    landings.push_back(land);
    for (std::size_t i = 1; i < ray.polyline.size(); ++i) CHECK(std::abs(std::arg(ray.polyline[i] / land)) < 1e-9);
    check_invariant_ray(c, ray);
  }
  for (std::size_t i = 0; i < landings.size(); ++i)
    for (std::size_t j = i + 1; j < landings.size(); ++j) CHECK(std::abs(landings[i] - landings[j]) > 0.5);
  CHECK_THROWS_AS(trace_ray(c, fp, white, 4), ValidationError);
}

TEST_CASE("rays of the odd quintic from the origin") {
  const auto c = odd_quintic();
  const auto fp = fixed_points(c, 212);
  int white = -1;
  for (std::size_t i = 0; i < fp.points.size(); ++i)
    if (std::abs(fp.points[i].location.to_complex()) < 1e-20) white = static_cast<int>(i);
  REQUIRE(white >= 0);
  std::vector<double> lands;
  for (int k = 0; k < 2; ++k) {
    const auto ray = trace_ray(c, fp, white, k);
    const cd land = fp.points[static_cast<std::size_t>(ray.landing)].location.to_complex();
    lands.push_back(land.real());
    CHECK(std::abs(land.imag()) < 1e-12);
    check_invariant_ray(c, ray);
    // Forward iterates of traced points stay on the ray and fall back to the origin.
    cd x = ray.polyline[ray.polyline.size() / 2];
    for (int i = 0; i < 60; ++i) x = eval(c, x);
    CHECK(std::abs(x) < 1e-12);
  }
  std::sort(lands.begin(), lands.end());
  CHECK(lands[0] == doctest::Approx(-std::sqrt(2.0 / 3.0)));
  CHECK(lands[1] == doctest::Approx(std::sqrt(2.0 / 3.0)));
}

TEST_CASE("single ray of 3z^2 - 2z^3") {
  const auto c = from_coeffs({0, 0, 3, -2});
  const auto fp = fixed_points(c, 212);
  CHECK(fp.repelling() == 1);
  for (std::size_t i = 0; i < fp.points.size(); ++i) {
    if (fp.points[i].kind != FixedClass::Superattracting) continue;
    const auto ray = trace_ray(c, fp, static_cast<int>(i), 0);
    CHECK(fp.points[static_cast<std::size_t>(ray.landing)].location.to_complex().real() == doctest::Approx(0.5));
    check_invariant_ray(c, ray);
  }
}

TEST_CASE("reconstructed trees") {
  for (int d = 2; d <= 7; ++d) CHECK(canonical_code(reconstruct_tree(star_polynomial(d), 212)) == canonical_code(white_star(d - 1)));
  CHECK(canonical_code(reconstruct_tree(reversed_star(6), 212)) == canonical_code(black_star(5)));
  const PlaneTree asym = reconstruct_tree(asymmetric_quintic(), 212);
  CHECK(tree_type(asym) == TreeType{2, 1, 1});
  CHECK(aut_order(asym) == 1);
  const PlaneTree sym = reconstruct_tree(odd_quintic(), 212);
  CHECK(aut_order(sym) == 2);
  CHECK(canonical_code(sym) != canonical_code(asym));
  for (int r = 1; r <= 3; ++r)
    for (int s = 1; s <= 3; ++s) CHECK(canonical_code(reconstruct_tree(lambda_rs(r, s), 212)) == canonical_code(lambda_tree(r, s)));
}

TEST_CASE("reconstruction rejects non-conservative input") {
  CHECK_THROWS(reconstruct_tree(ConservativePolynomial::from_rational(UniPoly{0, 0, 1, 1}), 212));
}

TEST_CASE("property: solved polynomials reconstruct to trees of their type") {
  for (const TreeType& alpha : std::vector<TreeType>{{2, 1}, {1, 1}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1}, {3, 1, 1}, {2, 2, 1}, {4, 1}, {1, 1, 1, 1}}) {
    const auto s = filter_degenerate(solve_type(alpha));
    const int d = s.system.degree, p = static_cast<int>(alpha.size());
    std::set<TreeCode> expected, found;
    for (const auto& t : trees_of_type(alpha)) expected.insert(canonical_code(t));
    for (const auto& cls : scale_classes(s)) {
      std::set<TreeCode> in_class;
      for (auto i : cls) {
        const auto c = solution_polynomial(s, s.points[i]);
        const auto rec = reconstruct(c, s.precision);
        CHECK(rec.fixed.superattracting() == p);
        CHECK(rec.fixed.repelling() == d - p);
        CHECK(rec.tree.edge_count() == d - 1);
        CHECK(tree_type(rec.tree) == alpha);
        // Every black vertex receives exactly one ray per incident edge.
        for (int v = 0; v < rec.tree.vertex_count(); ++v) {
          if (rec.tree.is_white(v)) continue;
          int landed = 0;
          for (const auto& ray : rec.rays) landed += ray.landing == v;
          CHECK(landed == rec.tree.degree(v));
        }
        in_class.insert(canonical_code(rec.tree));
      }
      CHECK(in_class.size() == 1);
      found.insert(in_class.begin(), in_class.end());
    }
    CHECK_MESSAGE(found == expected, type_to_string(alpha));
  }
}

TEST_CASE("basin pictures") {
  const Viewport view{-2, 2, -2, 2};
  const auto img = render_basins(star_polynomial(2), view, 101, 100);
  CHECK(img.width == 101);
  CHECK(img.rgb.size() == 101u * 101u * 3u);
  const int centre = img.basin[50 * 101 + 50];
  CHECK(centre >= 0);
  CHECK(img.basin[0] != centre);
  // Pixels well inside the unit disk share the basin of 0, outside points escape.
  for (int y = 0; y < 101; ++y)
    for (int x = 0; x < 101; ++x) {
      const double re = -2 + 4.0 * (x + 0.5) / 101, im = 2 - 4.0 * (y + 0.5) / 101;
      const double r = std::hypot(re, im);
      if (r < 0.95) CHECK(img.basin[static_cast<std::size_t>(y * 101 + x)] == centre);
      if (r > 1.05) CHECK(img.basin[static_cast<std::size_t>(y * 101 + x)] == -1);
    }
  const std::string ppm = img.ppm();
  CHECK(ppm.rfind("P6\n101 101\n255\n", 0) == 0);
  CHECK(ppm.size() == std::string("P6\n101 101\n255\n").size() + 101u * 101u * 3u);
  CHECK_THROWS_AS(render_basins(star_polynomial(2), Viewport{1, 1, 0, 1}, 10, 10), ValidationError);
}

TEST_CASE("basin symmetry") {
  const Viewport view{-1.5, 1.5, -1.5, 1.5};
  const auto f6 = render_basins(reversed_star(6), view, 300, 200);
  CHECK(symmetry_score(f6, view, std::polar(1.0, 2 * std::numbers::pi / 5)) >= 0.995);
  CHECK(f6.attractors.size() == 5);
  const auto odd = render_basins(odd_quintic(), view, 300, 200);
  CHECK(symmetry_score(odd, view, cd(-1, 0)) >= 0.995);
  // The asymmetric quintic has no half-turn symmetry.
  const auto asym = render_basins(asymmetric_quintic(), Viewport{-3, 1, -2, 2}, 200, 200);
  CHECK(symmetry_score(asym, Viewport{-3, 1, -2, 2}, cd(-1, 0)) < 0.9);
  const auto again = render_basins(reversed_star(6), view, 300, 200);
  CHECK(again.ppm() == f6.ppm());
}

TEST_CASE("fixed points of solutions over a tall degree-35 field") {
  const auto s = filter_degenerate(solve_type({4, 1, 1, 1}));
  REQUIRE(s.points.size() == 35);
  for (const auto& pt : s.points) {
    const auto fp = fixed_points(solution_polynomial(s, pt), s.precision);
    CHECK(fp.superattracting() == 4);
    CHECK(fp.repelling() == 4);
    PrecisionScope scope(s.precision);
    for (const auto& f : fp.points)
      if (f.kind == FixedClass::Superattracting) CHECK(abs(f.multiplier) < pow2(-150));
  }
}
