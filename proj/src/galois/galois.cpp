#include "conserv/galois.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "conserv/dyntree.hpp"
#include "conserv/errors.hpp"

namespace conserv {

namespace {

using Poly = std::vector<NfElem>;

Poly poly_mul(const Poly& a, const Poly& b, const NfElem& zero) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, zero);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

// Remainder modulo a monic polynomial.
Poly poly_rem_monic(Poly a, const Poly& f) {
  const std::size_t n = f.size() - 1;
  for (std::size_t k = a.size(); k-- > n;) {
    const NfElem c = a[k];
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j <= n; ++j) a[k - n + j] = a[k - n + j] - c * f[j];
  }
  if (a.size() > n) a.resize(n);
  return a;
}

// Power sums P_0..P_m of the roots of a monic polynomial f of degree n.
std::vector<NfElem> root_power_sums(const Poly& f, std::size_t m, const NumberField* k) {
  const std::size_t n = f.size() - 1;
  std::vector<NfElem> p(m + 1, NfElem(k, Rational(0)));
  p[0] = NfElem(k, Rational(static_cast<long>(n)));
  for (std::size_t j = 1; j <= m; ++j) {
    NfElem acc(k, Rational(0));
    for (std::size_t i = 1; i <= std::min(j - 1, n); ++i) acc = acc + f[n - i] * p[j - i];
    if (j <= n) acc = acc + f[n - j] * Rational(static_cast<long>(j));
    p[j] = -acc;
  }
  return p;
}

struct Invariant {
  std::string name;
  std::function<UniPoly()> exact;
  std::function<BigComplex(std::size_t)> numeric;  // value at orbit.points[i]
};

BigComplex power_sum_numeric(const std::vector<BigComplex>& xs, int k) {
  BigComplex acc(BigFloat(0L), BigFloat(0L));
  for (const auto& x : xs) {
    BigComplex t(BigFloat(1L), BigFloat(0L));
    for (int i = 0; i < k; ++i) t *= x;
    acc += t;
  }
  return acc;
}

std::string describe_field(const UniPoly& minpoly) {
  const int n = minpoly.degree();
  if (n == 1) return "Q";
  if (n == 2) {
    const UniPoly p = primitive_part(minpoly);
    const Integer a = p.coeff(2).get_num(), b = p.coeff(1).get_num(), c = p.coeff(0).get_num();
    const Integer disc = b * b - 4 * a * c;
    return "Q(sqrt(" + squarefree_kernel(disc).get_str() + "))";
  }
  return "number field of degree " + std::to_string(n);
}

}  // namespace

Integer squarefree_kernel(const Integer& n) {
  if (n == 0) throw ValidationError("squarefree kernel of zero");
  Integer m = abs(n), out = 1;
  for (unsigned long p = 2; p < 100000 && p * p <= m; ++p) {
    int e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    if (e % 2) out *= p;
  }
  if (mpz_perfect_square_p(m.get_mpz_t()) == 0) out *= m;
  return n < 0 ? Integer(-out) : out;
}

std::vector<GaloisOrbit> orbit_decomposition(const SolutionSet& s) {
  const auto classes = scale_classes(s);
  std::map<std::size_t, std::size_t> tree_of;  // point index -> index into codes
  std::vector<TreeCode> codes;
  std::set<std::size_t> failed;
  for (const auto& cls : classes) {
    try {
      const auto c = solution_polynomial(s, s.points[cls.front()]);
      codes.push_back(canonical_code(reconstruct_tree(c, s.precision)));
      for (auto i : cls) tree_of[i] = codes.size() - 1;
    } catch (const Error&) {
      for (auto i : cls) failed.insert(s.points[i].component);
    }
  }
  if (!failed.empty()) {
    std::string list;
    for (auto c : failed) list += (list.empty() ? "" : ", ") + std::to_string(c);
    throw ReconstructionError("tree reconstruction failed on component(s) " + list);
  }
  std::vector<GaloisOrbit> orbits;
  for (std::size_t ci = 0; ci < s.components.size(); ++ci) {
    const auto& comp = s.components[ci];
    if (comp.degenerate) continue;
    std::map<TreeCode, std::size_t> witness;
    std::vector<SolutionPoint> pts;
    std::vector<TreeCode> pt_trees;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (s.points[i].component != ci || s.points[i].degenerate) continue;
      const TreeCode& code = codes[tree_of.at(i)];
      witness.emplace(code, i);
      pts.push_back(s.points[i]);
      pt_trees.push_back(code);
    }
    if (witness.empty()) continue;
    std::vector<TreeCode> trees;
    for (const auto& [code, i] : witness) trees.push_back(code);
    auto same = std::find_if(orbits.begin(), orbits.end(), [&](const GaloisOrbit& o) { return o.trees == trees; });
    if (same != orbits.end()) {
      same->merged_factors.push_back(comp.factor);
      continue;
    }
    GaloisOrbit o;
    o.type = s.system.alpha;
    o.factor = comp.factor;
    o.merged_factors = {comp.factor};
    o.trees = trees;
    o.orbit_length = static_cast<int>(trees.size());
    for (const auto& [code, i] : witness) o.witness_points.push_back(s.points[i]);
    o.groups = s.symmetric_system.groups;
    o.exact = comp.exact;
    o.points = std::move(pts);
    o.point_trees = std::move(pt_trees);
    orbits.push_back(std::move(o));
  }
  return orbits;
}

std::vector<GaloisOrbit> orbit_decomposition(const TreeType& alpha, unsigned precision) {
  return orbit_decomposition(solve_type(alpha, precision));
}

UniPoly critical_power_sum(const GaloisOrbit& orbit, int k) {
  const NumberField* field = &orbit.exact->field();
  const auto& u = orbit.exact->parameters();
  NfElem total(field, Rational(0));
  for (const auto& g : orbit.groups) {
    auto e = [&](int i) { return i <= g.size ? NfElem(field, u[g.offset + static_cast<std::size_t>(i) - 1]) : NfElem(field, Rational(0)); };
    std::vector<NfElem> p(static_cast<std::size_t>(k) + 1, NfElem(field, Rational(0)));
    for (int m = 1; m <= k; ++m) {
      NfElem acc = e(m) * Rational(m % 2 ? m : -m);
      for (int i = 1; i < m; ++i) acc = acc + e(i) * p[static_cast<std::size_t>(m - i)] * Rational(i % 2 ? 1 : -1);
      p[static_cast<std::size_t>(m)] = acc;
    }
    total = total + p[static_cast<std::size_t>(k)];
  }
  return total.value();
}

UniPoly multiplier_trace(const GaloisOrbit& orbit, int k) {
  const NumberField* field = &orbit.exact->field();
  const NfElem zero(field, Rational(0));
  Poly c;
  for (const auto& v : orbit.exact->values()) c.emplace_back(field, v);
  const std::size_t d = c.size() - 1;
  // F = (C - z) / lc is monic with the fixed points as roots.
  Poly f = c;
  f[1] = f[1] - NfElem(field, Rational(1));
  const NfElem lc = f.back();
  for (auto& x : f) x = x / lc;
  Poly dc;
  for (std::size_t i = 1; i <= d; ++i) dc.push_back(c[i] * Rational(static_cast<long>(i)));
  dc = poly_rem_monic(dc, f);
  Poly g{NfElem(field, Rational(1))};
  for (int i = 0; i < k; ++i) g = poly_rem_monic(poly_mul(g, dc, zero), f);
  const auto p = root_power_sums(f, d, field);
  NfElem acc = zero;
  for (std::size_t j = 0; j < g.size(); ++j) acc = acc + g[j] * p[j];
  return acc.value();
}

FieldOfModuli field_of_moduli(const GaloisOrbit& orbit, unsigned precision) {
  if (!orbit.exact || orbit.points.empty()) throw ValidationError("orbit carries no component data");
  const int d = edge_count_of(orbit.type) + 1;
  std::vector<Invariant> candidates;
  candidates.push_back({"power sum of degree " + std::to_string(d - 1) + " of the critical points",
                        [&] { return critical_power_sum(orbit, d - 1); },
                        [&](std::size_t i) { return power_sum_numeric(orbit.points[i].coords, d - 1); }});
  for (const auto& g : orbit.groups) {
    if (g.size < 2) continue;
    const std::size_t o1 = g.offset, o2 = g.offset + 1;
    candidates.push_back({"ratio s2/s1^2 of the valency-" + std::to_string(g.valency) + " critical points",
                          [&orbit, o1, o2] {
                            const NumberField* k = &orbit.exact->field();
                            const auto& u = orbit.exact->parameters();
                            NfElem s1(k, u[o1]), s2(k, u[o2]);
                            if (s1.is_zero()) throw ValidationError("vanishing first symmetric function");
                            return (s2 / (s1 * s1)).value();
                          },
                          [&orbit, o1, o2](std::size_t i) {
                            const auto& sv = orbit.points[i].symmetric;
                            return sv[o2] / (sv[o1] * sv[o1]);
                          }});
    break;
  }
  for (int k = 1; k <= 3; ++k)
    candidates.push_back({"trace of the fixed-point multipliers to the power " + std::to_string(k),
                          [&orbit, k] { return multiplier_trace(orbit, k); },
                          [&orbit, k, precision](std::size_t i) {
                            // The multiset of multipliers is an affine-conjugacy invariant.
                            ConservativePolynomial c;
                            c.degree = static_cast<int>(orbit.exact->size()) - 1;
                            c.precision = precision;
                            c.exact = orbit.exact;
                            c.theta = orbit.points[i].theta;
                            PrecisionScope scope(precision + 64);
                            c.coeffs = c.coefficients();
                            BigComplex acc(BigFloat(0L), BigFloat(0L));
                            for (const auto& fp : fixed_points(c, precision).points) {
                              BigComplex t(BigFloat(1L), BigFloat(0L));
                              for (int j = 0; j < k; ++j) t *= fp.multiplier;
                              acc += t;
                            }
                            return acc;
                          }});

  const NumberField& field = orbit.exact->field();
  for (const auto& inv : candidates) {
    UniPoly phi;
    try {
      phi = inv.exact();
    } catch (const ValidationError&) {
      continue;
    }
    const UniPoly chi = field.charpoly(phi);
    const UniPoly mp = monic(squarefree_part(chi));
    if (mp.degree() != orbit.orbit_length) continue;
    // The charpoly is the resultant Res_t(factor, y - phi); it must be a power of the minimal polynomial.
    if (pow(mp, static_cast<unsigned>(chi.degree() / mp.degree())) != chi) continue;
    // The invariant must be constant on each tree and separate distinct trees.
    PrecisionScope scope(precision + 64);
    const BigFloat tol = pow2(-static_cast<long>(precision / 4));
    std::map<TreeCode, BigComplex> value;
    bool ok = true;
    for (std::size_t i = 0; i < orbit.points.size() && ok; ++i) {
      const BigComplex v = inv.numeric(i);
      auto it = value.find(orbit.point_trees[i]);
      if (it == value.end()) {
        value.emplace(orbit.point_trees[i], v);
      } else if (abs(it->second - v) > tol * max(BigFloat(1L), abs(v))) {
        ok = false;
      }
    }
    for (auto a = value.begin(); ok && a != value.end(); ++a)
      for (auto b = std::next(a); b != value.end(); ++b)
        if (abs(a->second - b->second) <= tol * max(BigFloat(1L), abs(a->second))) ok = false;
    if (!ok) continue;
    FieldOfModuli out;
    out.degree = mp.degree();
    out.minpoly = primitive_part(mp);
    out.invariant = inv.name;
    out.description = describe_field(mp);
    return out;
  }
  throw PrecisionExhaustedError("no invariant generated a field of the orbit's degree");
}

InvariantReport check_invariants(const std::vector<GaloisOrbit>& orbits) {
  InvariantReport report;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const auto& o = orbits[i];
    ++report.orbits_checked;
    const std::string tag = "orbit " + std::to_string(i) + " (" + type_to_string(o.type) + "): ";
    if (o.orbit_length != static_cast<int>(o.trees.size())) report.violations.push_back(tag + "orbit length differs from the tree count");
    if (o.trees.empty()) {
      report.violations.push_back(tag + "empty orbit");
      continue;
    }
    const PlaneTree first = tree_from_code(o.trees.front());
    const int aut = aut_order(first);
    for (const auto& code : o.trees) {
      const PlaneTree t = tree_from_code(code);
      if (tree_type(t) != o.type)
        report.violations.push_back(tag + code + " has type " + type_to_string(tree_type(t)));
      if (aut_order(t) != aut)
        report.violations.push_back(tag + code + " has automorphism order " + std::to_string(aut_order(t)) + ", " +
                                    o.trees.front() + " has " + std::to_string(aut));
    }
  }
  return report;
}

}  // namespace conserv
