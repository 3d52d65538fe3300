// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "conserv/consys.hpp"
#include "conserv/dyntree.hpp"
#include "conserv/errors.hpp"
#include "conserv/families.hpp"
#include "conserv/galois.hpp"
#include "conserv/treecomb.hpp"

using namespace conserv;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

int failures = 0;

void criterion(const char* id, const char* title, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit_seconds) out.require(false, "runtime over " + std::to_string(static_cast<int>(limit_seconds)) + " s");
  if (!out.pass) ++failures;
  std::printf("%s %s  %s  (%.2f s)  %s\n", id, out.pass ? "PASS" : "FAIL", title, secs, out.detail.str().c_str());
  std::fflush(stdout);
}

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

// Vertices in one automorphism orbit share their smallest outgoing rooted code.
TreeCode vertex_key(const PlaneTree& t, int u) {
  TreeCode best;
  bool first = true;
  for (int v : t.adjacency[static_cast<std::size_t>(u)]) {
    TreeCode c = rooted_code(t, u, v);
    if (first || c < best) best = c;
    first = false;
  }
  return best;
}

// One scaling class per automorphism orbit of white vertices that can sit at the origin.
int origin_choices(const PlaneTree& t, int valency) {
  std::set<TreeCode> keys;
  for (int u = 0; u < t.vertex_count(); ++u)
    if (t.is_white(u) && t.degree(u) == valency) keys.insert(vertex_key(t, u));
  return static_cast<int>(keys.size());
}

ConservativePolynomial rational_poly(std::vector<Rational> c) { return ConservativePolynomial::from_rational(UniPoly(std::move(c))); }

struct SweepEntry {
  TreeType alpha;
  SolutionSet solutions;
};

std::vector<SweepEntry> sweep;  // criterion 5 solutions, reused by 6 and 8

}  // namespace

int main() {
  criterion("C1", "counting identity for m = 1..9", 5, [](Outcome& o) {
    for (int m = 1; m <= 9; ++m) {
      const auto r = normalized_count(m);
      o.require(r.total == binomial(static_cast<unsigned long>(2 * m), static_cast<unsigned long>(m)), "m=" + std::to_string(m));
      Integer sum = 0;
      for (const auto& c : r.contributions) sum += c;
      o.require(sum == r.total, "contributions m=" + std::to_string(m));
    }
    auto parts = normalized_count(3).contributions;
    std::sort(parts.begin(), parts.end());
    o.require(parts == std::vector<Integer>{4, 4, 12}, "m=3 contributions");
    o.detail << "binomial(2m,m) for m<=9, m=3 parts 12,4,4";
  });

  criterion("C2", "type <3,1,1>: one orbit over Q(sqrt 41)", 60, [](Outcome& o) {
    const auto s = filter_degenerate(solve_type({3, 1, 1}));
    const auto orbits = orbit_decomposition(s);
    o.require(orbits.size() == 1, "orbit count");
    if (orbits.size() != 1) return;
    const auto& orb = orbits[0];
    std::set<TreeCode> expected;
    for (const auto& t : trees_of_type({3, 1, 1})) expected.insert(canonical_code(t));
    o.require(expected.size() == 2, "two enumerated trees");
    o.require(orb.orbit_length == 2 && std::set<TreeCode>(orb.trees.begin(), orb.trees.end()) == expected, "orbit holds both trees");
    // b = s2 / s1^2 of the pair of simple critical points, exactly in the component field.
    const NumberField& k = orb.exact->field();
    const auto& u = orb.exact->parameters();
    std::size_t off = 0;
    for (const auto& g : orb.groups)
      if (g.size == 2) off = g.offset;
    const UniPoly b = k.mul(u[off + 1], k.inverse(k.mul(u[off], u[off])));
    UniPoly mp = k.minpoly(b);
    if (mp.coeff(mp.degree()) < 0) mp = -mp;
    o.require(mp == UniPoly{2, -9, 5}, "minimal polynomial of b");
    const Rational disc = mp.coeff(1) * mp.coeff(1) - 4 * mp.coeff(2) * mp.coeff(0);
    o.require(disc == 41, "discriminant 41");
    o.require(field_of_moduli(orb).degree == 2, "field degree 2");
    const TreeCode lambda41 = canonical_code(lambda_tree(4, 1));
    o.require(!s.rejected.empty(), "degenerate solution detected");
    for (const auto& pt : s.rejected) o.require(pt.merged_tree && *pt.merged_tree == lambda41, "degenerate point annotated as lambda_{4,1}");
    o.detail << "b roots of 5x^2-9x+2, disc 41, " << s.rejected.size() << " degenerate points merge to lambda_{4,1}";
  });

  criterion("C3", "type <2,1,1>: two rational orbits", 60, [](Outcome& o) {
    const auto s = filter_degenerate(solve_type({2, 1, 1}));
    const auto orbits = orbit_decomposition(s);
    o.require(orbits.size() == 2, "orbit count");
    const auto odd = rational_poly({0, 0, 0, Rational(5, 2), 0, Rational(-3, 2)});
    const auto asym = rational_poly({0, 0, 0, Rational(55, 9), Rational(605, 72), Rational(121, 36)});
    o.require(rotation_form_order(odd) == 2, "k=2 for the odd quintic");
    o.require(rotation_form_order(asym) == 1, "k=1 for the asymmetric quintic");
    int odd_orbits = 0, asym_orbits = 0;
    for (const auto& orb : orbits) {
      o.require(orb.orbit_length == 1, "orbit length 1");
      bool all_odd = true, all_asym = true;
      for (const auto& pt : orb.points) {
        const auto c = solution_polynomial(s, pt);
        all_odd = all_odd && are_equivalent(c, odd);
        all_asym = all_asym && are_equivalent(c, asym);
      }
      o.require(all_odd != all_asym, "orbit matches exactly one display");
      odd_orbits += all_odd;
      asym_orbits += all_asym;
      const auto c0 = solution_polynomial(s, orb.points[0]);
      o.require(rotation_form_order(c0) == (all_odd ? 2 : 1), "rotation order of solver output");
    }
    o.require(odd_orbits == 1 && asym_orbits == 1, "one orbit per display");
    o.detail << "orbits match -3z^5/2+5z^3/2 (k=2) and 121z^5/36+605z^4/72+55z^3/9 (k=1)";
  });

  criterion("C4", "lambda_{r,s} family for r,s <= 4", 120, [](Outcome& o) {
    int found = 0;
    for (int r = 1; r <= 4; ++r)
      for (int s = 1; s <= 4; ++s) {
        const auto c = lambda_rs(r, s);
        const std::string tag = "(" + std::to_string(r) + "," + std::to_string(s) + ")";
        o.require((*c.rational)(Rational(1)) == 1, "C(1)=1 " + tag);
        o.require(lambda_constant(r, s) * Rational(factorial(static_cast<unsigned long>(r)) * factorial(static_cast<unsigned long>(s))) ==
                      Rational(factorial(static_cast<unsigned long>(r + s + 1))),
                  "constant " + tag);
        const auto sol = filter_degenerate(solve_type({std::max(r, s), std::min(r, s)}));
        bool hit = false;
        for (const auto& pt : sol.points)
          if (are_equivalent(solution_polynomial(sol, pt), c)) {
            hit = true;
            break;
          }
        o.require(hit, "solver output equivalent to lambda " + tag);
        found += hit;
      }
    o.detail << found << "/16 matched";
  });

  criterion("C5", "tree round trip for d <= 6, p-1 <= 3", 600, [](Outcome& o) {
    int types = 0, points = 0;
    for (int d = 2; d <= 6; ++d)
      for (const auto& alpha : types_of_degree(d, 4)) {
        ++types;
        const std::string tag = type_to_string(alpha);
        auto s = filter_degenerate(solve_type(alpha));
        std::map<TreeCode, int> expected, found;
        for (const auto& t : trees_of_type(alpha)) expected[canonical_code(t)] = origin_choices(t, alpha[0]);
        for (const auto& cls : scale_classes(s)) {
          std::set<TreeCode> in_class;
          for (auto i : cls) {
            const auto rec = reconstruct(solution_polynomial(s, s.points[i]), s.precision);
            o.require(tree_type(rec.tree) == alpha, "type of reconstruction " + tag);
            in_class.insert(canonical_code(rec.tree));
            ++points;
          }
          o.require(in_class.size() == 1, "scaling class is one tree " + tag);
          ++found[*in_class.begin()];
        }
        o.require(found == expected, "tree multiset " + tag);
        sweep.push_back({alpha, std::move(s)});
      }
    o.detail << types << " types, " << points << " solutions reconstructed";
  });

  criterion("C6", "fixed point dichotomy on the criterion 5 polynomials", 600, [](Outcome& o) {
    o.require(!sweep.empty(), "criterion 5 sweep available");
    const BigFloat bound = BigFloat(1) + BigFloat(Rational(1, 10000000000L));
    int polys = 0;
    for (const auto& e : sweep) {
      const int d = e.solutions.system.degree, p = static_cast<int>(e.alpha.size());
      for (const auto& pt : e.solutions.points) {
        const auto fp = fixed_points(solution_polynomial(e.solutions, pt), e.solutions.precision);
        o.require(fp.superattracting() == p && fp.repelling() == d - p, "counts " + type_to_string(e.alpha));
        for (const auto& f : fp.points)
          if (f.kind == FixedClass::Repelling) o.require(abs(f.multiplier) > bound, "repelling multiplier bound " + type_to_string(e.alpha));
        ++polys;
      }
    }
    o.detail << polys << " polynomials";
  });

  criterion("C7", "unique-type trees for m <= 9", 60, [](Outcome& o) {
    for (int m = 1; m <= 9; ++m) {
      std::set<TreeCode> expected{canonical_code(white_star(m)), canonical_code(black_star(m))};
      for (int r = 1; r < m; ++r) expected.insert(canonical_code(lambda_tree(r, m - r)));
      std::set<TreeCode> got;
      for (const auto& t : unique_type_trees(m)) got.insert(canonical_code(t));
      o.require(got == expected, "m=" + std::to_string(m));
    }
    o.detail << "stars and lambda_{r,s} exactly";
  });

  criterion("C8", "Galois invariance over the criterion 5 orbits", 600, [](Outcome& o) {
    o.require(!sweep.empty(), "criterion 5 sweep available");
    std::size_t orbits = 0, violations = 0;
    for (const auto& e : sweep) {
      const auto report = check_invariants(orbit_decomposition(e.solutions));
      orbits += report.orbits_checked;
      violations += report.violations.size();
      for (const auto& v : report.violations) o.require(false, type_to_string(e.alpha) + ": " + v);
    }
    o.detail << orbits << " orbits, " << violations << " violations";
  });

  criterion("C9", "indecomposability for d in {4,6,8}", 60, [](Outcome& o) {
    int checked = 0;
    for (int d : {4, 6, 8}) {
      const auto power = star_polynomial(d);
      const auto split = decompose(power);
      o.require(split && split->exact && split->outer_rational && split->inner_rational &&
                    compose(*split->outer_rational, *split->inner_rational) == UniPoly::monomial(1, d),
                "split of z^" + std::to_string(d));
      for (const auto& alpha : types_of_degree(d, 4)) {
        const auto s = filter_degenerate(solve_type(alpha));
        for (const auto& pt : s.points) {
          const auto c = solution_polynomial(s, pt);
          if (are_equivalent(c, power)) continue;
          o.require(!decompose(c), "decomposable solution of type " + type_to_string(alpha));
          ++checked;
        }
      }
    }
    o.detail << checked << " solutions indecomposable, z^4, z^6, z^8 split";
  });

  criterion("C10", "basin rendering determinism and symmetry at 800x800", 90, [](Outcome& o) {
    const Viewport view{-1.5, 1.5, -1.5, 1.5};
    const auto t0 = std::chrono::steady_clock::now();
    const Image f6 = render_basins(reversed_star(6), view, 800, 200);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 30, "f6 render under 30 s");
    const double rot = symmetry_score(f6, view, std::polar(1.0, 2 * std::numbers::pi / 5));
    o.require(rot >= 0.995, "rotation score");
    o.require(render_basins(reversed_star(6), view, 800, 200).ppm() == f6.ppm(), "f6 rerun identical");
    const auto odd_poly = rational_poly({0, 0, 0, Rational(5, 2), 0, Rational(-3, 2)});
    const Image odd = render_basins(odd_poly, view, 800, 200);
    const double flip = symmetry_score(odd, view, {-1.0, 0.0});
    o.require(flip >= 0.995, "odd quintic score");
    o.require(render_basins(odd_poly, view, 800, 200).ppm() == odd.ppm(), "odd quintic rerun identical");
    char buf[160];
    std::snprintf(buf, sizeof buf, "rotation %.5f, reflection %.5f, reruns identical", rot, flip);
    o.detail << buf;
  });

  std::printf("%s: %d failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
