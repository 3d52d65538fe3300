#include "conserv/consys.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "conserv/dyntree.hpp"
#include "conserv/errors.hpp"
#include "conserv/factor.hpp"
#include "conserv/modular.hpp"
#include "conserv/roots.hpp"

namespace conserv {

namespace {

void check_alpha(const TreeType& alpha) {
  if (alpha.empty()) throw ValidationError("empty tree type");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 1) throw ValidationError("tree type entries must be positive");
    if (i && alpha[i] > alpha[i - 1]) throw ValidationError("tree type must be non-increasing");
  }
}

int degree_of(const TreeType& alpha) { return edge_count_of(alpha) + 1; }

MultiPoly integrate_z(const MultiPoly& f) {
  MultiPoly out(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    Exponent e2 = e;
    ++e2[0];
    out.add_term(e2, c / Rational(e2[0]));
  }
  return out;
}

// Removes variable 0, which must be absent.
MultiPoly drop_first(const MultiPoly& f) {
  MultiPoly out(f.nvars() - 1);
  for (const auto& [e, c] : f.terms()) {
    if (e[0] != 0) throw InternalError("variable still present");
    out.add_term(Exponent(e.begin() + 1, e.end()), c);
  }
  return out;
}

std::vector<ValencyGroup> make_groups(const TreeType& alpha) {
  std::vector<ValencyGroup> groups;
  std::size_t offset = 0;
  for (std::size_t i = 1; i < alpha.size(); ++i) {
    if (groups.empty() || groups.back().valency != alpha[i]) groups.push_back({alpha[i], 0, offset});
    ++groups.back().size;
    ++offset;
  }
  return groups;
}

// Q_g(z) with s-variables starting at index first_var (z is variable 0).
MultiPoly group_poly(std::size_t nvars, const ValencyGroup& g, std::size_t first_var) {
  const MultiPoly z = MultiPoly::var(nvars, 0);
  MultiPoly q = pow(z, static_cast<unsigned>(g.size));
  for (int i = 1; i <= g.size; ++i)
    q += Rational(i % 2 ? -1 : 1) * MultiPoly::var(nvars, first_var + g.offset + static_cast<std::size_t>(i) - 1) *
         pow(z, static_cast<unsigned>(g.size - i));
  return q;
}

std::vector<MultiPoly> remainder_equations(const MultiPoly& c_minus_z, const std::vector<MultiPoly>& qs,
                                           const std::vector<ValencyGroup>& groups) {
  std::vector<MultiPoly> eqs;
  for (std::size_t g = 0; g < qs.size(); ++g) {
    MultiPoly r = divrem(c_minus_z, qs[g], 0).remainder;
    for (int j = 0; j < groups[g].size; ++j) eqs.push_back(drop_first(r.coeff_in(0, j)));
  }
  return eqs;
}

template <class T>
using Poly = std::vector<T>;

template <class T>
Poly<T> poly_mul(const Poly<T>& a, const Poly<T>& b, const T& zero) {
  if (a.empty() || b.empty()) return {};
  Poly<T> out(a.size() + b.size() - 1, zero);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

// Value of a polynomial in the symmetric unknowns at field elements.
NfElem evaluate_at(const MultiPoly& f, const std::vector<NfElem>& values, const NumberField* k) {
  NfElem acc(k, Rational(0));
  for (const auto& [e, c] : f.terms()) {
    NfElem term(k, c);
    for (std::size_t j = 0; j < e.size(); ++j)
      for (int r = 0; r < e[j]; ++r) term = term * values[j];
    acc = acc + term;
  }
  return acc;
}

BigComplex evaluate_at(const MultiPoly& f, const std::vector<BigComplex>& values) {
  BigComplex acc(BigFloat(0L), BigFloat(0L));
  for (const auto& [e, c] : f.terms()) {
    BigComplex term{BigFloat(c), BigFloat(0L)};
    for (std::size_t j = 0; j < e.size(); ++j)
      for (int r = 0; r < e[j]; ++r) term *= values[j];
    acc += term;
  }
  return acc;
}

// A degree-one place of Q[t]/(factor): a prime p with a root r of the factor
// modulo p, and the images of the symmetric values there.
struct ModularPlace {
  modp::u64 p;
  std::vector<modp::u64> s;
};

std::vector<ModularPlace> modular_places(const UniPoly& factor, const std::vector<UniPoly>& numerators, const UniPoly& dh, std::size_t count) {
  std::vector<ModularPlace> out;
  for (auto [p, root] : modp::degree_one_places(factor, count + 2)) {
    auto dp = modp::reduce(dh, p);
    if (!dp) continue;
    const modp::u64 d = modp::evaluate(*dp, root, p);
    if (d == 0) continue;
    const modp::u64 dinv = modp::inv(d, p);
    ModularPlace place{p, {}};
    bool ok = true;
    for (const auto& num : numerators) {
      auto np = modp::reduce(num, p);
      if (!np) {
        ok = false;
        break;
      }
      place.s.push_back(modp::mul(modp::evaluate(*np, root, p), dinv, p));
    }
    if (ok) out.push_back(std::move(place));
    if (out.size() == count) break;
  }
  return out;
}

// Exact zero test of f at the symmetric values; a nonzero image at any place settles it.
template <class Values>
bool vanishes_at(const MultiPoly& f, const std::vector<ModularPlace>& places, Values&& values) {
  for (const auto& place : places) {
    auto v = evaluate_mod(f, place.s, place.p);
    if (v && *v != 0) return false;
  }
  const std::vector<NfElem> exact = values();
  return evaluate_at(f, exact, exact.front().field()).is_zero();
}

bool position_less(const BigComplex& a, const BigComplex& b, const BigFloat& tol) {
  if (abs(a.re - b.re) > tol) return a.re < b.re;
  return a.im < b.im;
}

// Symbolic collision conditions in the symmetric unknowns.
struct CollisionTests {
  std::vector<MultiPoly> origin;                         // per group: constant term of Q_g
  std::vector<MultiPoly> within;                         // per group: discriminant (size >= 2)
  std::vector<std::pair<std::pair<int, int>, MultiPoly>> cross;  // resultants of distinct groups
};

CollisionTests collision_tests(const SymmetricSystem& sys) {
  const std::size_t nv = sys.unknowns + 1;
  CollisionTests t;
  std::vector<MultiPoly> qs;
  for (const auto& g : sys.groups) qs.push_back(group_poly(nv, g, 1));
  for (std::size_t g = 0; g < qs.size(); ++g) {
    t.origin.push_back(drop_first(qs[g].coeff_in(0, 0)));
    if (sys.groups[g].size >= 2)
      t.within.push_back(drop_first(resultant(qs[g], derivative(qs[g], 0), 0)));
    else
      t.within.emplace_back(sys.unknowns);
    for (std::size_t h = g + 1; h < qs.size(); ++h)
      t.cross.push_back({{static_cast<int>(g), static_cast<int>(h)}, drop_first(resultant(qs[g], qs[h], 0))});
  }
  return t;
}

using GroupPairs = std::vector<std::pair<int, int>>;  // group -1 is the origin

struct Clustering {
  std::vector<int> cluster;  // per vertex (0 = origin, then coords)
  int count = 0;
};

// Groups coordinates (and the origin) that coincide at the given precision.
Clustering cluster_points(const std::vector<BigComplex>& pts, unsigned precision) {
  const std::size_t n = pts.size();
  BigFloat scale = 1;
  for (const auto& p : pts) scale = max(scale, abs(p));
  const BigFloat tight = scale * pow2(-static_cast<long>(precision / 4));
  const BigFloat loose = scale * pow2(-static_cast<long>(precision / 8));
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      BigFloat dist = abs(pts[i] - pts[j]);
      if (dist < tight) {
        parent[static_cast<std::size_t>(find(static_cast<int>(i)))] = find(static_cast<int>(j));
      } else if (dist < loose) {
        throw PrecisionExhaustedError("coordinate separation undecidable at this precision");
      }
    }
  Clustering c;
  std::map<int, int> ids;
  for (std::size_t i = 0; i < n; ++i) {
    int r = find(static_cast<int>(i));
    if (!ids.count(r)) ids[r] = c.count++;
    c.cluster.push_back(ids[r]);
  }
  return c;
}

}  // namespace

MultiPoly build_primitive(const TreeType& alpha) {
  check_alpha(alpha);
  const std::size_t nv = alpha.size();
  const int d = degree_of(alpha);
  const MultiPoly z = MultiPoly::var(nv, 0);
  MultiPoly dc = MultiPoly::constant(nv, d) * pow(z, static_cast<unsigned>(alpha[0]));
  for (std::size_t j = 1; j < nv; ++j) dc = dc * pow(z - MultiPoly::var(nv, j), static_cast<unsigned>(alpha[j]));
  return integrate_z(dc);
}

ConservativeSystem build_system(const TreeType& alpha) {
  ConservativeSystem s;
  s.alpha = alpha;
  s.primitive = build_primitive(alpha);
  s.degree = degree_of(alpha);
  s.unknowns = alpha.size() - 1;
  const std::size_t nv = alpha.size();
  for (std::size_t j = 1; j < nv; ++j) {
    const MultiPoly aj = MultiPoly::var(nv, j);
    s.equations.push_back(drop_first(s.primitive.substitute(0, aj) - aj));
  }
  return s;
}

SymmetricSystem build_symmetric_system(const TreeType& alpha) {
  check_alpha(alpha);
  SymmetricSystem s;
  s.alpha = alpha;
  s.degree = degree_of(alpha);
  s.groups = make_groups(alpha);
  s.unknowns = alpha.size() - 1;
  const std::size_t nv = s.unknowns + 1;
  const MultiPoly z = MultiPoly::var(nv, 0);
  MultiPoly dc = MultiPoly::constant(nv, s.degree) * pow(z, static_cast<unsigned>(alpha[0]));
  std::vector<MultiPoly> qs;
  for (const auto& g : s.groups) {
    qs.push_back(group_poly(nv, g, 1));
    dc = dc * pow(qs.back(), static_cast<unsigned>(g.valency));
  }
  const MultiPoly c = integrate_z(dc);
  for (int k = 0; k <= s.degree; ++k) s.coefficients.push_back(drop_first(c.coeff_in(0, k)));
  if (s.unknowns > 0) s.equations = remainder_equations(c - z, qs, s.groups);
  return s;
}

ChartSystem build_chart_system(const TreeType& alpha, const Rational& pinned) {
  check_alpha(alpha);
  auto groups = make_groups(alpha);
  if (groups.empty()) throw ValidationError("chart needs at least two white vertices");
  const std::size_t unknowns = alpha.size() - 1;
  // Variables: z, L, then s-unknowns with the first one pinned.
  const std::size_t nv = unknowns + 2;
  const MultiPoly z = MultiPoly::var(nv, 0);
  const MultiPoly lead = MultiPoly::var(nv, 1);
  ChartSystem out;
  out.names.push_back("L");
  std::vector<MultiPoly> qs;
  MultiPoly dc = lead * pow(z, static_cast<unsigned>(alpha[0]));
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    MultiPoly q = pow(z, static_cast<unsigned>(g.size));
    for (int i = 1; i <= g.size; ++i) {
      const std::size_t idx = g.offset + static_cast<std::size_t>(i) - 1;
      MultiPoly coeff = (gi == 0 && i == 1) ? MultiPoly::constant(nv, pinned)
                                             : Rational(i % 2 ? -1 : 1) * MultiPoly::var(nv, idx + 1);
      q += coeff * pow(z, static_cast<unsigned>(g.size - i));
      if (!(gi == 0 && i == 1)) out.names.push_back("s" + std::to_string(gi + 1) + "_" + std::to_string(i));
    }
    qs.push_back(q);
    dc = dc * pow(q, static_cast<unsigned>(g.valency));
  }
  // Variable 2 carried the pinned unknown; remove it.
  for (auto& eq : remainder_equations(integrate_z(dc) - z, qs, groups)) {
    MultiPoly reduced(nv - 2);
    for (const auto& [e, c] : eq.terms()) {
      if (e[1] != 0) throw InternalError("pinned unknown still present");
      Exponent e2;
      e2.push_back(e[0]);
      e2.insert(e2.end(), e.begin() + 2, e.end());
      reduced.add_term(e2, c);
    }
    out.equations.push_back(reduced);
  }
  return out;
}

std::vector<std::string> symmetric_names(const SymmetricSystem& s) {
  std::vector<std::string> names;
  for (std::size_t g = 0; g < s.groups.size(); ++g)
    for (int i = 1; i <= s.groups[g].size; ++i) names.push_back("s" + std::to_string(g + 1) + "_" + std::to_string(i));
  return names;
}

std::vector<UniPoly> SolutionSet::factors() const {
  std::vector<UniPoly> f;
  for (const auto& c : components) f.push_back(c.factor);
  return f;
}

std::size_t SolutionSet::nondegenerate_count() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const SolutionPoint& p) { return !p.degenerate; }));
}

namespace {

// Coordinates of one point from its symmetric values, grouped and sorted.
std::vector<BigComplex> coordinates_from(const SymmetricSystem& sys, const std::vector<BigComplex>& s, unsigned precision) {
  std::vector<BigComplex> coords;
  const BigFloat tol = pow2(-static_cast<long>(precision / 4));
  for (const auto& g : sys.groups) {
    std::vector<BigComplex> q(static_cast<std::size_t>(g.size) + 1);
    q[static_cast<std::size_t>(g.size)] = BigComplex(BigFloat(1L), BigFloat(0L));
    for (int i = 1; i <= g.size; ++i) {
      BigComplex v = s[g.offset + static_cast<std::size_t>(i) - 1];
      q[static_cast<std::size_t>(g.size - i)] = i % 2 ? -v : v;
    }
    auto roots = approximate_roots(q);
    std::sort(roots.begin(), roots.end(), [&](const BigComplex& a, const BigComplex& b) { return position_less(a, b, tol); });
    for (auto& r : roots) coords.push_back(std::move(r));
  }
  return coords;
}

std::vector<int> vertex_valencies(const TreeType& alpha) { return alpha; }

GroupPairs induced_pairs(const Clustering& c, const SymmetricSystem& sys) {
  // Group of each vertex: origin -1, then by group.
  std::vector<int> group_of{-1};
  for (std::size_t g = 0; g < sys.groups.size(); ++g)
    for (int i = 0; i < sys.groups[g].size; ++i) group_of.push_back(static_cast<int>(g));
  GroupPairs pairs;
  for (std::size_t i = 0; i < group_of.size(); ++i)
    for (std::size_t j = i + 1; j < group_of.size(); ++j)
      if (c.cluster[i] == c.cluster[j]) pairs.emplace_back(std::min(group_of[i], group_of[j]), std::max(group_of[i], group_of[j]));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

TreeType merged_type_of(const Clustering& c, const TreeType& alpha) {
  std::vector<int> sum(static_cast<std::size_t>(c.count), 0);
  auto val = vertex_valencies(alpha);
  for (std::size_t i = 0; i < c.cluster.size(); ++i) sum[static_cast<std::size_t>(c.cluster[i])] += val[i];
  std::sort(sum.rbegin(), sum.rend());
  return sum;
}

}  // namespace

BigFloat residual(const SolutionSet& s, const std::vector<BigComplex>& coords) {
  BigFloat worst = 0;
  for (const auto& eq : s.system.equations) worst = max(worst, abs(evaluate_at(eq, coords)));
  return worst;
}

SolutionSet solve_type(const TreeType& alpha, unsigned precision, const SolveOptions& options) {
  check_alpha(alpha);
  if (precision < 64) throw ValidationError("precision must be at least 64 bits");
  const int p = static_cast<int>(alpha.size());
  if (p - 1 > options.max_unknowns)
    throw ResourceError("type has " + std::to_string(p - 1) + " unknowns; the solver cap is " + std::to_string(options.max_unknowns));
  SolutionSet out;
  out.precision = precision;
  out.system = build_system(alpha);
  out.symmetric_system = build_symmetric_system(alpha);
  const auto& sys = out.symmetric_system;
  const int d = out.system.degree;
  out.bezout_bound = 1;
  for (int i = 1; i < p; ++i) out.bezout_bound *= d;

  if (p == 1) {
    out.eliminant = UniPoly::x();
    Component comp;
    comp.factor = UniPoly::x();
    comp.field = std::make_shared<NumberField>(comp.factor, false);
    comp.exact = std::make_shared<FieldCoefficients>(comp.field, std::vector<UniPoly>{}, UniPoly::constant(1), sys.coefficients);
    comp.merged_type = alpha;
    out.components.push_back(comp);
    SolutionPoint pt;
    PrecisionScope scope(precision);
    pt.theta = BigComplex(BigFloat(0L), BigFloat(0L));
    pt.merged_type = alpha;
    out.points.push_back(pt);
    return out;
  }

  const ShapeBasis sb = shape_basis(sys.equations);
  out.weights = sb.weights;
  out.eliminant = primitive_part(sb.h);
  long perm = 1;
  for (const auto& g : sys.groups)
    for (int i = 2; i <= g.size; ++i) perm *= i;
  if (static_cast<long>(sb.h.degree()) * perm > out.bezout_bound) throw InternalError("solution count exceeds the Bezout bound");

  const CollisionTests tests = collision_tests(sys);
  const UniPoly dh = derivative(sb.h);
  for (const auto& factor : irreducible_factors(sb.h)) {
    Component comp;
    comp.factor = factor;
    auto field = std::make_shared<NumberField>(factor, false);
    comp.field = field;
    std::vector<UniPoly> nums;
    for (const auto& g : sb.numerators) nums.push_back(field->reduce(g));
    comp.exact = std::make_shared<FieldCoefficients>(field, std::move(nums), field->reduce(dh), sys.coefficients);
    auto values = [&comp, &field]() {
      std::vector<NfElem> v;
      for (const auto& x : comp.symmetric()) v.emplace_back(field.get(), x);
      return v;
    };
    const auto places = modular_places(factor, sb.numerators, dh, 3);
    GroupPairs exact_pairs;
    for (std::size_t g = 0; g < sys.groups.size(); ++g) {
      if (vanishes_at(tests.origin[g], places, values)) {
        comp.origin_collision = true;
        exact_pairs.emplace_back(-1, static_cast<int>(g));
      }
      if (sys.groups[g].size >= 2 && vanishes_at(tests.within[g], places, values)) {
        comp.within_collision = true;
        exact_pairs.emplace_back(static_cast<int>(g), static_cast<int>(g));
      }
    }
    for (const auto& [gh, res] : tests.cross)
      if (vanishes_at(res, places, values)) {
        comp.cross_collision = true;
        exact_pairs.push_back(gh);
      }
    std::sort(exact_pairs.begin(), exact_pairs.end());
    comp.degenerate = !exact_pairs.empty();
    comp.merged_type = alpha;

    // Points come from the rational parametrization s_j = G_j(t) / h'(t).
    std::size_t height = height_bits(dh);
    for (const auto& g : sb.numerators) height = std::max(height, height_bits(g));
    const std::size_t index = out.components.size();
    for (const auto& root : algebraic_roots(factor, precision)) {
      unsigned work = precision + static_cast<unsigned>(height) + 64;
      for (int attempt = 0;; ++attempt) {
        PrecisionScope scope(work);
        SolutionPoint pt;
        pt.component = index;
        pt.theta = root.approximate(work);
        const BigComplex dval = evaluate(dh, pt.theta);
        for (const auto& g : sb.numerators) pt.symmetric.push_back(evaluate(g, pt.theta) / dval);
        pt.coords = coordinates_from(sys, pt.symmetric, precision);
        pt.degenerate = comp.degenerate;
        std::vector<BigComplex> vertices{BigComplex(BigFloat(0L), BigFloat(0L))};
        vertices.insert(vertices.end(), pt.coords.begin(), pt.coords.end());
        Clustering cl = cluster_points(vertices, precision);
        if (induced_pairs(cl, sys) != exact_pairs) {
          if (attempt >= 3) throw PrecisionExhaustedError("numeric collision pattern disagrees with the exact one");
          work *= 2;
          continue;
        }
        for (std::size_t i = 0; i < vertices.size(); ++i)
          for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (cl.cluster[i] == cl.cluster[j]) pt.collisions.emplace_back(static_cast<int>(i), static_cast<int>(j));
        pt.merged_type = merged_type_of(cl, alpha);
        if (pt.degenerate) {
          comp.merged_type = pt.merged_type;
        } else {
          // Residuals are only meaningful for simple coordinates.
          if (residual(out, pt.coords) >= pow2(-static_cast<long>(precision / 2))) {
            if (attempt >= 3) throw PrecisionExhaustedError("residual check failed after precision escalation");
            work *= 2;
            continue;
          }
        }
        out.points.push_back(std::move(pt));
        break;
      }
    }
    out.components.push_back(std::move(comp));
  }
  return out;
}

SolutionSet filter_degenerate(const SolutionSet& s) {
  SolutionSet out = s;
  out.points.clear();
  for (const auto& pt : s.points) {
    if (!pt.degenerate) {
      out.points.push_back(pt);
      continue;
    }
    SolutionPoint annotated = pt;
    annotated.merged_tree = canonical_code(reconstruct_tree(solution_polynomial(s, pt), s.precision));
    out.rejected.push_back(std::move(annotated));
  }
  return out;
}

ConservativePolynomial solution_polynomial(const SolutionSet& s, const SolutionPoint& pt) {
  const auto& alpha = s.system.alpha;
  const auto& comp = s.components.at(pt.component);
  ConservativePolynomial c;
  c.degree = s.system.degree;
  c.precision = s.precision;
  c.theta = pt.theta;
  c.source = "solve " + type_to_string(alpha);
  if (comp.factor.degree() == 1) {
    std::vector<Rational> q;
    for (const auto& a : comp.exact->values()) q.push_back(a.coeff(0));
    c.rational = UniPoly(q);
  } else {
    c.exact = comp.exact;
  }
  PrecisionScope scope(working_precision() > s.precision ? working_precision() : s.precision + 64);
  c.coeffs = c.coefficients();
  // Critical points: the origin and the coordinates, merged where they coincide.
  std::vector<BigComplex> vertices{BigComplex(BigFloat(0L), BigFloat(0L))};
  vertices.insert(vertices.end(), pt.coords.begin(), pt.coords.end());
  std::vector<int> cluster(vertices.size());
  std::iota(cluster.begin(), cluster.end(), 0);
  for (auto [i, j] : pt.collisions) cluster[static_cast<std::size_t>(j)] = cluster[static_cast<std::size_t>(i)];
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    int r = cluster[i];
    while (cluster[static_cast<std::size_t>(r)] != r) r = cluster[static_cast<std::size_t>(r)];
    if (!slot.count(r)) {
      slot[r] = c.critical_points.size();
      c.critical_points.push_back({vertices[static_cast<std::size_t>(r)], 0});
    }
    c.critical_points[slot[r]].multiplicity += alpha[i];
  }
  return c;
}

std::vector<std::vector<std::size_t>> scale_classes(const SolutionSet& s) {
  const int d = s.system.degree;
  const unsigned precision = s.precision;
  PrecisionScope scope(precision + 64);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.points.size(); ++i)
    if (!s.points[i].degenerate) idx.push_back(i);
  std::vector<bool> used(s.points.size(), false);
  std::vector<std::vector<std::size_t>> classes;
  const BigFloat two_pi = BigFloat::pi() * BigFloat(2L);
  auto close = [&](const std::vector<BigComplex>& a, const std::vector<BigComplex>& b) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      BigFloat scale = max(BigFloat(1L), abs(a[j]));
      if (abs(a[j] - b[j]) > scale * pow2(-static_cast<long>(precision / 4))) return false;
    }
    return true;
  };
  // Weight of each symmetric unknown under z -> eps z.
  std::vector<int> weight;
  for (const auto& g : s.symmetric_system.groups)
    for (int i = 1; i <= g.size; ++i) weight.push_back(i);
  for (std::size_t i : idx) {
    if (used[i]) continue;
    std::vector<std::size_t> cls;
    for (int j = 0; j < d - 1; ++j) {
      std::vector<BigComplex> scaled;
      for (std::size_t u = 0; u < weight.size(); ++u) {
        BigComplex eps = BigComplex::polar(BigFloat(1L), two_pi * BigFloat(static_cast<long>(j * weight[u])) / BigFloat(static_cast<long>(d - 1)));
        scaled.push_back(eps * s.points[i].symmetric[u]);
      }
      for (std::size_t q : idx)
        if (!used[q] && close(scaled, s.points[q].symmetric)) {
          used[q] = true;
          cls.push_back(q);
        }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(cls);
  }
  return classes;
}

long predicted_solution_count(const TreeType& alpha, int cap) {
  const long d = edge_count_of(alpha) + 1;
  // Sum of m1 (d-1) / aut as an exact fraction.
  Rational total = 0;
  for (const auto& t : trees_of_type(alpha, std::max(cap, edge_count_of(alpha)))) {
    long m1 = 0;
    for (int v = 0; v < t.vertex_count(); ++v)
      if (t.is_white(v) && t.degree(v) == alpha[0]) ++m1;
    Rational term(m1 * (d - 1), aut_order(t));
    term.canonicalize();
    total += term;
  }
  if (total.get_den() != 1) throw InternalError("non-integral predicted solution count");
  return total.get_num().get_si();
}

}  // namespace conserv
