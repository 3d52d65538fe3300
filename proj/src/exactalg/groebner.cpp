#include "conserv/groebner.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "conserv/errors.hpp"
#include "conserv/numberfield.hpp"

namespace conserv {

namespace gb {

Mono lcm(const Mono& a, const Mono& b) {
  Mono r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    r.e[i] = std::max(a.e[i], b.e[i]);
    r.deg = static_cast<std::uint16_t>(r.deg + r.e[i]);
  }
  return r;
}

Mono quotient(const Mono& a, const Mono& b) {
  Mono r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint8_t>(a.e[i] - b.e[i]);
  r.deg = static_cast<std::uint16_t>(a.deg - b.deg);
  return r;
}

Mono product(const Mono& a, const Mono& b) {
  Mono r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    int s = a.e[i] + b.e[i];
    if (s > 255) throw ResourceError("monomial exponent exceeds 255");
    r.e[i] = static_cast<std::uint8_t>(s);
  }
  r.deg = static_cast<std::uint16_t>(a.deg + b.deg);
  return r;
}

bool coprime(const Mono& a, const Mono& b) {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.e[i] && b.e[i]) return false;
  return true;
}

bool grevlex_greater(const Mono& a, const Mono& b) {
  if (a.deg != b.deg) return a.deg > b.deg;
  for (std::size_t i = kMaxVars; i-- > 0;)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
  return false;
}

std::uint64_t& Fp::modulus() {
  thread_local std::uint64_t p = 2;
  return p;
}

namespace {

// Field-generic helpers.
inline bool is_zero(const Fp& a) { return a.v == 0; }
inline bool is_zero(const Rational& a) { return sgn(a) == 0; }
inline Fp f_mul(const Fp& a, const Fp& b) { return {modp::mul(a.v, b.v, Fp::modulus())}; }
inline Rational f_mul(const Rational& a, const Rational& b) { return a * b; }
inline Fp f_sub(const Fp& a, const Fp& b) { return {modp::sub(a.v, b.v, Fp::modulus())}; }
inline Rational f_sub(const Rational& a, const Rational& b) { return a - b; }
inline Fp f_neg(const Fp& a) { return {a.v == 0 ? 0 : Fp::modulus() - a.v}; }
inline Rational f_neg(const Rational& a) { return -a; }
inline Fp f_inv(const Fp& a) { return {modp::inv(a.v, Fp::modulus())}; }
inline Rational f_inv(const Rational& a) { return 1 / a; }

template <class F>
void make_monic(Poly<F>& f) {
  if (f.empty()) return;
  F inv = f_inv(f.front().c);
  for (auto& t : f) t.c = f_mul(t.c, inv);
}

// f - c * m * g, all sorted decreasing.
template <class F>
Poly<F> sub_scaled(const Poly<F>& f, const F& c, const Mono& m, const Poly<F>& g, std::size_t f_from = 0) {
  Poly<F> out;
  out.reserve(f.size() - f_from + g.size());
  std::size_t i = f_from, j = 0;
  while (i < f.size() || j < g.size()) {
    if (j == g.size()) {
      out.push_back(f[i++]);
      continue;
    }
    Mono gm = product(m, g[j].m);
    if (i == f.size() || grevlex_greater(gm, f[i].m)) {
      out.push_back({gm, f_neg(f_mul(c, g[j].c))});
      ++j;
    } else if (gm == f[i].m) {
      F v = f_sub(f[i].c, f_mul(c, g[j].c));
      if (!is_zero(v)) out.push_back({gm, v});
      ++i;
      ++j;
    } else {
      out.push_back(f[i++]);
    }
  }
  return out;
}

template <class F>
const Poly<F>* find_reducer(const Mono& m, const std::vector<const Poly<F>*>& basis) {
  for (const auto* g : basis)
    if (g->front().m.divides(m)) return g;
  return nullptr;
}

template <class F>
Poly<F> reduce_full(Poly<F> p, const std::vector<const Poly<F>*>& basis) {
  Poly<F> result;
  while (!p.empty()) {
    const Mono lm = p.front().m;
    const Poly<F>* g = find_reducer<F>(lm, basis);
    if (!g) {
      // Move every leading term that cannot be reduced.
      result.push_back(p.front());
      p.erase(p.begin());
      continue;
    }
    F c = p.front().c;  // g is monic
    p = sub_scaled(p, c, quotient(lm, g->front().m), *g);
  }
  return result;
}

struct Pair {
  std::size_t i, j;
  Mono lcm;
  unsigned sugar;
};

}  // namespace

template <class F>
std::vector<Poly<F>> groebner(std::vector<Poly<F>> gens) {
  std::vector<Poly<F>> polys;
  std::vector<unsigned> sugar;
  std::vector<bool> active;
  std::vector<Pair> pairs;

  auto update = [&](std::size_t h) {
    const Mono& lh = polys[h].front().m;
    std::vector<std::size_t> c_list;
    for (std::size_t g = 0; g < polys.size(); ++g)
      if (g != h && active[g]) c_list.push_back(g);
    std::vector<std::size_t> d_list;
    for (std::size_t idx = 0; idx < c_list.size(); ++idx) {
      std::size_t g1 = c_list[idx];
      Mono l1 = lcm(lh, polys[g1].front().m);
      bool keep = coprime(lh, polys[g1].front().m);
      if (!keep) {
        bool dominated = false;
        for (std::size_t k = idx + 1; k < c_list.size() && !dominated; ++k)
          if (lcm(lh, polys[c_list[k]].front().m).divides(l1)) dominated = true;
        for (std::size_t g2 : d_list) {
          if (dominated) break;
          if (lcm(lh, polys[g2].front().m).divides(l1)) dominated = true;
        }
        keep = !dominated;
      }
      if (keep) d_list.push_back(g1);
    }
    std::vector<Pair> next;
    for (const auto& pr : pairs) {
      Mono lih = lcm(polys[pr.i].front().m, lh);
      Mono ljh = lcm(polys[pr.j].front().m, lh);
      bool drop = lh.divides(pr.lcm) && !(lih == pr.lcm) && !(ljh == pr.lcm);
      if (!drop) next.push_back(pr);
    }
    for (std::size_t g : d_list) {
      const Mono& lg = polys[g].front().m;
      if (coprime(lh, lg)) continue;
      Mono l = lcm(lh, lg);
      unsigned s = std::max(sugar[h] + l.deg - lh.deg, sugar[g] + l.deg - lg.deg);
      next.push_back({g, h, l, s});
    }
    pairs = std::move(next);
    for (std::size_t g = 0; g < polys.size(); ++g)
      if (g != h && active[g] && lh.divides(polys[g].front().m)) active[g] = false;
  };

  auto active_basis = [&]() {
    std::vector<const Poly<F>*> out;
    for (std::size_t g = 0; g < polys.size(); ++g)
      if (active[g]) out.push_back(&polys[g]);
    return out;
  };

  std::sort(gens.begin(), gens.end(), [](const Poly<F>& a, const Poly<F>& b) {
    if (a.empty() || b.empty()) return b.empty() && !a.empty();
    return grevlex_greater(b.front().m, a.front().m);
  });
  for (auto& g : gens) {
    if (g.empty()) continue;
    Poly<F> r = reduce_full(g, active_basis());
    if (r.empty()) continue;
    make_monic(r);
    unsigned s = 0;
    for (const auto& t : g) s = std::max<unsigned>(s, t.m.deg);
    polys.push_back(std::move(r));
    sugar.push_back(s);
    active.push_back(true);
    update(polys.size() - 1);
    if (polys.back().front().m.deg == 0) return {polys.back()};
  }

  while (!pairs.empty()) {
    auto best = std::min_element(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (a.sugar != b.sugar) return a.sugar < b.sugar;
      return grevlex_greater(b.lcm, a.lcm);
    });
    Pair pr = *best;
    pairs.erase(best);
    const Poly<F>& gi = polys[pr.i];
    const Poly<F>& gj = polys[pr.j];
    Poly<F> s = sub_scaled(Poly<F>{}, f_neg(gi.front().c), quotient(pr.lcm, gi.front().m), gi);
    s = sub_scaled(s, gj.front().c, quotient(pr.lcm, gj.front().m), gj);
    Poly<F> r = reduce_full(std::move(s), active_basis());
    if (r.empty()) continue;
    make_monic(r);
    polys.push_back(std::move(r));
    sugar.push_back(pr.sugar);
    active.push_back(true);
    if (polys.back().front().m.deg == 0) return {polys.back()};
    update(polys.size() - 1);
  }

  // Minimal basis, then interreduce.
  std::vector<Poly<F>> minimal;
  for (std::size_t g = 0; g < polys.size(); ++g) {
    if (!active[g]) continue;
    bool redundant = false;
    for (std::size_t k = 0; k < polys.size() && !redundant; ++k)
      if (k != g && active[k] && polys[k].front().m.divides(polys[g].front().m) &&
          !(polys[k].front().m == polys[g].front().m && k > g))
        redundant = true;
    if (!redundant) minimal.push_back(polys[g]);
  }
  std::sort(minimal.begin(), minimal.end(), [](const Poly<F>& a, const Poly<F>& b) { return grevlex_greater(b.front().m, a.front().m); });
  std::vector<Poly<F>> reduced;
  for (std::size_t g = 0; g < minimal.size(); ++g) {
    std::vector<const Poly<F>*> others;
    for (std::size_t k = 0; k < minimal.size(); ++k)
      if (k != g) others.push_back(&minimal[k]);
    Poly<F> tail(minimal[g].begin() + 1, minimal[g].end());
    Poly<F> r{minimal[g].front()};
    Poly<F> rt = reduce_full(std::move(tail), others);
    r.insert(r.end(), rt.begin(), rt.end());
    reduced.push_back(std::move(r));
  }
  return reduced;
}

template <class F>
Poly<F> normal_form(const Poly<F>& f, const std::vector<Poly<F>>& basis) {
  std::vector<const Poly<F>*> ptrs;
  for (const auto& g : basis) ptrs.push_back(&g);
  return reduce_full(f, ptrs);
}

template <>
std::vector<Poly<Rational>> convert<Rational>(const std::vector<MultiPoly>& polys, bool* ok) {
  std::vector<Poly<Rational>> out;
  *ok = true;
  for (const auto& p : polys) {
    if (p.nvars() > kMaxVars) throw ValidationError("too many variables for the Groebner engine");
    Poly<Rational> q;
    for (const auto& [e, c] : p.terms()) {
      Mono m;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] > 255) throw ResourceError("exponent exceeds 255");
        m.e[i] = static_cast<std::uint8_t>(e[i]);
        m.deg = static_cast<std::uint16_t>(m.deg + e[i]);
      }
      q.push_back({m, c});
    }
    std::sort(q.begin(), q.end(), [](const Term<Rational>& a, const Term<Rational>& b) { return grevlex_greater(a.m, b.m); });
    out.push_back(std::move(q));
  }
  return out;
}

template <>
std::vector<Poly<Fp>> convert<Fp>(const std::vector<MultiPoly>& polys, bool* ok) {
  const std::uint64_t p = Fp::modulus();
  std::vector<Poly<Fp>> out;
  *ok = true;
  for (const auto& q : convert<Rational>(polys, ok)) {
    Poly<Fp> r;
    for (const auto& t : q) {
      auto v = modp::reduce(t.c, p);
      if (!v) {
        *ok = false;
        return {};
      }
      if (*v) r.push_back({t.m, Fp{*v}});
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Mono> normal_set(const std::vector<Mono>& leading, std::size_t nvars, bool* zero_dim) {
  std::vector<int> bound(nvars, -1);
  for (const auto& m : leading) {
    int nz = -1, count = 0;
    for (std::size_t i = 0; i < nvars; ++i)
      if (m.e[i]) {
        nz = static_cast<int>(i);
        ++count;
      }
    if (count == 1) {
      int& b = bound[static_cast<std::size_t>(nz)];
      b = b < 0 ? m.e[static_cast<std::size_t>(nz)] : std::min<int>(b, m.e[static_cast<std::size_t>(nz)]);
    }
    if (count == 0) {
      *zero_dim = true;
      return {};
    }
  }
  *zero_dim = std::all_of(bound.begin(), bound.end(), [](int b) { return b > 0; });
  if (!*zero_dim) return {};
  std::vector<Mono> out;
  Mono cur;
  // Odometer over the box [0, bound_i).
  for (;;) {
    bool reducible = false;
    for (const auto& m : leading)
      if (m.divides(cur)) {
        reducible = true;
        break;
      }
    if (!reducible) out.push_back(cur);
    std::size_t i = 0;
    while (i < nvars) {
      if (cur.e[i] + 1 < bound[i]) {
        ++cur.e[i];
        ++cur.deg;
        break;
      }
      cur.deg = static_cast<std::uint16_t>(cur.deg - cur.e[i]);
      cur.e[i] = 0;
      ++i;
    }
    if (i == nvars) break;
  }
  std::sort(out.begin(), out.end(), [](const Mono& a, const Mono& b) { return grevlex_greater(b, a); });
  return out;
}

template std::vector<Poly<Fp>> groebner<Fp>(std::vector<Poly<Fp>>);
template std::vector<Poly<Rational>> groebner<Rational>(std::vector<Poly<Rational>>);
template Poly<Fp> normal_form<Fp>(const Poly<Fp>&, const std::vector<Poly<Fp>>&);
template Poly<Rational> normal_form<Rational>(const Poly<Rational>&, const std::vector<Poly<Rational>>&);

}  // namespace gb

namespace {

using gb::Fp;
using gb::Mono;
using u64 = std::uint64_t;
using Matrix = std::vector<std::vector<u64>>;

struct ModularQuotient {
  std::vector<Mono> basis;
  std::vector<Matrix> mult;  // mult[j][col][row]: x_j * basis[col] in coordinates
  std::size_t one_index = 0;
};

std::optional<ModularQuotient> modular_quotient(const std::vector<MultiPoly>& eqs, std::size_t nvars, u64 p, bool* positive_dim) {
  gb::ModulusScope scope(p);
  bool ok = true;
  auto gens = gb::convert<Fp>(eqs, &ok);
  if (!ok) return std::nullopt;
  auto basis = gb::groebner<Fp>(std::move(gens));
  std::vector<Mono> leading;
  for (const auto& g : basis) leading.push_back(g.front().m);
  bool zero_dim = false;
  ModularQuotient q;
  q.basis = gb::normal_set(leading, nvars, &zero_dim);
  *positive_dim = !zero_dim;
  if (!zero_dim) return std::nullopt;
  std::map<std::array<std::uint8_t, gb::kMaxVars>, std::size_t> index;
  for (std::size_t i = 0; i < q.basis.size(); ++i) index[q.basis[i].e] = i;
  const std::size_t dim = q.basis.size();
  q.one_index = index.at(Mono{}.e);
  q.mult.assign(nvars, Matrix(dim, std::vector<u64>(dim, 0)));
  for (std::size_t j = 0; j < nvars; ++j) {
    Mono xj;
    xj.e[j] = 1;
    xj.deg = 1;
    for (std::size_t col = 0; col < dim; ++col) {
      Mono m = gb::product(xj, q.basis[col]);
      auto it = index.find(m.e);
      if (it != index.end()) {
        q.mult[j][col][it->second] = 1;
        continue;
      }
      gb::Poly<Fp> nf = gb::normal_form<Fp>(gb::Poly<Fp>{{m, Fp{1}}}, basis);
      for (const auto& t : nf) q.mult[j][col][index.at(t.m.e)] = t.c.v;
    }
  }
  return q;
}

std::vector<u64> matvec(const Matrix& m_cols, const std::vector<u64>& v, u64 p) {
  const std::size_t n = v.size();
  std::vector<modp::u128> acc(n, 0);
  for (std::size_t col = 0; col < n; ++col) {
    if (v[col] == 0) continue;
    const auto& c = m_cols[col];
    for (std::size_t r = 0; r < n; ++r) acc[r] += static_cast<modp::u128>(c[r]) * v[col] % p;
  }
  std::vector<u64> out(n);
  for (std::size_t r = 0; r < n; ++r) out[r] = static_cast<u64>(acc[r] % p);
  return out;
}

// Solve K y = b for all right-hand sides, K given by columns; returns nullopt if singular.
std::optional<std::vector<std::vector<u64>>> solve_columns(const std::vector<std::vector<u64>>& cols, const std::vector<std::vector<u64>>& rhs, u64 p) {
  const std::size_t n = cols.size();
  const std::size_t k = rhs.size();
  // Augmented row-major matrix.
  std::vector<std::vector<u64>> a(n, std::vector<u64>(n + k));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) a[r][c] = cols[c][r];
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t r = 0; r < n; ++r) a[r][n + c] = rhs[c][r];
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    u64 inv = modp::inv(a[c][c], p);
    for (auto& x : a[c]) x = modp::mul(x, inv, p);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      u64 f = a[r][c];
      for (std::size_t j = c; j < n + k; ++j) a[r][j] = modp::sub(a[r][j], modp::mul(f, a[c][j], p), p);
    }
  }
  std::vector<std::vector<u64>> out(k, std::vector<u64>(n));
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t r = 0; r < n; ++r) out[c][r] = a[r][n + c];
  return out;
}

// Minimal polynomial of the operator M acting on v (Krylov); returns coefficients, monic, if degree == expect.
// Also returns coordinates of extra vectors in the Krylov basis.
struct KrylovResult {
  std::vector<u64> minpoly;  // low to high, without the leading 1, length = dim
  std::vector<std::vector<u64>> coords;
};

std::optional<KrylovResult> krylov(const Matrix& m, std::size_t one, const std::vector<std::vector<u64>>& extra, u64 p) {
  const std::size_t n = m.size();
  std::vector<std::vector<u64>> cols;
  std::vector<u64> v(n, 0);
  v[one] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    cols.push_back(v);
    v = matvec(m, v, p);
  }
  std::vector<std::vector<u64>> rhs{v};
  rhs.insert(rhs.end(), extra.begin(), extra.end());
  auto sol = solve_columns(cols, rhs, p);
  if (!sol) return std::nullopt;
  KrylovResult out;
  out.minpoly.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.minpoly[i] = modp::sub(0, (*sol)[0][i], p);
  out.coords.assign(sol->begin() + 1, sol->end());
  return out;
}

// Minimal polynomial of M's action on v, without assuming full degree.
std::vector<u64> vector_minpoly(const Matrix& m, std::size_t one, u64 p) {
  const std::size_t n = m.size();
  // Incremental elimination of the Krylov sequence with combination tracking.
  std::vector<std::vector<u64>> rows;       // reduced vectors
  std::vector<std::size_t> pivots;
  std::vector<std::vector<u64>> combos;     // combination of powers giving each row
  std::vector<u64> v(n, 0);
  v[one] = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<u64> w = v;
    std::vector<u64> combo(k + 1, 0);
    combo[k] = 1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      u64 f = w[pivots[r]];
      if (f == 0) continue;
      for (std::size_t i = 0; i < n; ++i) w[i] = modp::sub(w[i], modp::mul(f, rows[r][i], p), p);
      for (std::size_t i = 0; i < combos[r].size(); ++i) combo[i] = modp::sub(combo[i], modp::mul(f, combos[r][i], p), p);
    }
    std::size_t piv = 0;
    while (piv < n && w[piv] == 0) ++piv;
    if (piv == n) return combo;  // monic relation of degree k
    u64 inv = modp::inv(w[piv], p);
    for (auto& x : w) x = modp::mul(x, inv, p);
    for (auto& x : combo) x = modp::mul(x, inv, p);
    rows.push_back(std::move(w));
    pivots.push_back(piv);
    combos.push_back(std::move(combo));
    v = matvec(m, v, p);
  }
  throw InternalError("Krylov sequence did not terminate");
}

Matrix combine(const std::vector<Matrix>& mats, const std::vector<u64>& w, u64 p) {
  const std::size_t n = mats.front().size();
  Matrix out(n, std::vector<u64>(n, 0));
  for (std::size_t j = 0; j < mats.size(); ++j) {
    if (w[j] == 0) continue;
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r)
        if (mats[j][c][r]) out[c][r] = modp::add(out[c][r], modp::mul(w[j], mats[j][c][r], p), p);
  }
  return out;
}

UniPoly to_unipoly(const std::vector<Rational>& v, std::size_t from, std::size_t len, bool monic_top) {
  std::vector<Rational> c(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + len));
  if (monic_top) c.emplace_back(1);
  return UniPoly(std::move(c));
}

bool consistent(const std::vector<Rational>& cand, const std::vector<u64>& residues, u64 p) {
  for (std::size_t i = 0; i < cand.size(); ++i) {
    auto r = modp::reduce(cand[i], p);
    if (!r || *r != residues[i]) return false;
  }
  return true;
}

bool same_staircase(const std::vector<Mono>& a, const std::vector<Mono>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

// Rational reconstruction of a per-prime residue stream, checked against the next prime.
template <class Compute>
std::vector<Rational> reconstruct_stream(Compute&& compute, u64* prime_cursor, std::size_t* used) {
  modp::CrtAccumulator crt;
  std::size_t next_try = 1;
  int misses = 0;
  for (int guard = 0; guard < 4000; ++guard) {
    u64 p = *prime_cursor = modp::prev_prime(*prime_cursor);
    auto res = compute(p);
    if (!res) {
      if (++misses >= 8) throw ResourceError("too many unusable primes");
      continue;
    }
    misses = 0;
    if (crt.primes_used() >= next_try) {
      if (auto cand = crt.reconstruct()) {
        if (consistent(*cand, *res, p)) {
          *used += crt.primes_used() + 1;
          return *cand;
        }
      }
      next_try = crt.primes_used() + std::max<std::size_t>(1, crt.primes_used() / 2);
    }
    crt.add(*res, p);
  }
  throw ResourceError("modular reconstruction did not stabilize");
}

}  // namespace

UniPoly ShapeBasis::coordinate(std::size_t j) const {
  NumberField alg(h, /*check_irreducible=*/false);
  return alg.mul(numerators.at(j), alg.inverse(derivative(h)));
}

bool verify_shape(const ShapeBasis& s, const std::vector<MultiPoly>& equations) {
  using Elem = NumberField::Elem;
  NumberField alg(s.h, /*check_irreducible=*/false);
  const Elem dh = alg.from_poly(derivative(s.h));
  std::vector<Elem> g;
  for (const auto& n : s.numerators) g.push_back(alg.from_poly(n));
  // Homogenized substitution: E(G / h') * h'^deg(E) must vanish modulo h.
  std::vector<std::vector<Elem>> powers(s.nvars);
  std::vector<Elem> dh_powers;
  auto power_of = [&](std::vector<Elem>& pw, const Elem& base, int k) -> const Elem& {
    if (pw.empty()) pw.push_back(alg.from_rational(1));
    while (static_cast<int>(pw.size()) <= k) pw.push_back(alg.mul(pw.back(), base));
    return pw[static_cast<std::size_t>(k)];
  };
  for (const auto& eq : equations) {
    const int deg = eq.total_degree();
    Elem acc;
    for (const auto& [e, c] : eq.terms()) {
      Elem term = alg.from_rational(c);
      int used = 0;
      for (std::size_t j = 0; j < s.nvars; ++j) {
        if (!e[j]) continue;
        term = alg.mul(term, power_of(powers[j], g[j], e[j]));
        used += e[j];
      }
      if (deg > used) term = alg.mul(term, power_of(dh_powers, dh, deg - used));
      acc = alg.add(acc, term);
    }
    if (!NumberField::is_zero(acc)) return false;
  }
  Elem t;
  for (std::size_t j = 0; j < s.nvars; ++j) t = alg.add(t, alg.scale(g[j], s.weights[j]));
  return NumberField::is_zero(alg.sub(t, alg.mul(alg.from_poly(UniPoly::x()), dh)));
}

namespace {

// Cheap necessary condition for verify_shape, evaluated modulo a single prime.
bool verify_shape_mod(const ShapeBasis& s, const std::vector<MultiPoly>& equations, u64 p) {
  auto hp = modp::reduce(s.h, p);
  if (!hp || modp::degree(*hp) != s.h.degree()) return true;  // inconclusive, let the exact check decide
  modp::Poly dh = modp::derivative(*hp, p);
  std::vector<modp::Poly> g;
  for (const auto& n : s.numerators) {
    auto np = modp::reduce(n, p);
    if (!np) return true;
    g.push_back(*np);
  }
  auto pw = [&](const modp::Poly& b, int k) {
    modp::Poly r{1};
    for (int i = 0; i < k; ++i) r = modp::rem(modp::mul(r, b, p), *hp, p);
    return r;
  };
  for (const auto& eq : equations) {
    const int deg = eq.total_degree();
    modp::Poly acc;
    for (const auto& [e, c] : eq.terms()) {
      auto cp = modp::reduce(c, p);
      if (!cp) return true;
      modp::Poly term{*cp};
      int used = 0;
      for (std::size_t j = 0; j < s.nvars; ++j) {
        if (!e[j]) continue;
        term = modp::rem(modp::mul(term, pw(g[j], e[j]), p), *hp, p);
        used += e[j];
      }
      if (deg > used) term = modp::rem(modp::mul(term, pw(dh, deg - used), p), *hp, p);
      acc = modp::add(acc, term, p);
    }
    if (!acc.empty()) return false;
  }
  return true;
}

bool squarefree_mod_some_prime(const UniPoly& h) {
  u64 p = 1ull << 61;
  for (int k = 0; k < 5; ++k) {
    p = modp::prev_prime(p);
    auto hp = modp::reduce(h, p);
    if (!hp || modp::degree(*hp) != h.degree()) continue;
    if (modp::degree(modp::gcd(*hp, modp::derivative(*hp, p), p)) == 0) return true;
  }
  return false;
}

}  // namespace

ShapeBasis shape_basis(const std::vector<MultiPoly>& equations, int max_gamma, Verification mode) {
  if (equations.empty()) throw ValidationError("empty system");
  const std::size_t nvars = equations.front().nvars();
  for (const auto& e : equations)
    if (e.nvars() != nvars) throw ValidationError("inconsistent variable counts");

  u64 cursor = (1ull << 62);
  std::size_t primes_used = 0;
  std::vector<Mono> staircase;
  bool have_staircase = false;
  int disagreements = 0;

  auto quotient_at = [&](u64 p) -> std::optional<ModularQuotient> {
    bool positive_dim = false;
    auto q = modular_quotient(equations, nvars, p, &positive_dim);
    if (positive_dim) throw PositiveDimensionError("system has infinitely many solutions");
    if (!q) return std::nullopt;
    if (!have_staircase) {
      staircase = q->basis;
      have_staircase = true;
    } else if (!same_staircase(staircase, q->basis)) {
      if (++disagreements >= 3) {
        staircase = q->basis;
        disagreements = 0;
      }
      return std::nullopt;
    }
    return q;
  };

  // Establish the staircase with two agreeing primes.
  std::optional<ModularQuotient> probe;
  u64 probe_p = 0;
  for (int k = 0; k < 6 && !probe; ++k) {
    cursor = modp::prev_prime(cursor);
    probe = quotient_at(cursor);
    probe_p = cursor;
  }
  if (!probe) throw ResourceError("no usable prime for the Groebner computation");
  const std::size_t dim = probe->basis.size();
  ShapeBasis out;
  out.nvars = nvars;
  out.quotient_dim = dim;
  if (dim == 0) {
    out.h = UniPoly::constant(1);
    out.numerators.assign(nvars, UniPoly{});
    out.weights.assign(nvars, Rational(1));
    return out;
  }

  for (int gamma = 1; gamma <= max_gamma; ++gamma) {
    std::vector<u64> w(nvars);
    std::vector<Rational> weights(nvars);
    Integer g = 1;
    for (std::size_t j = 0; j < nvars; ++j) {
      weights[j] = Rational(g);
      g *= gamma;
    }
    // Quick test at the probe prime.
    {
      u64 p = probe_p;
      for (std::size_t j = 0; j < nvars; ++j) w[j] = modp::reduce(weights[j].get_num(), p);
      Matrix mt = combine(probe->mult, w, p);
      std::vector<std::vector<u64>> extra;
      auto kr = krylov(mt, probe->one_index, extra, p);
      if (!kr) continue;
    }
    auto compute = [&](u64 p) -> std::optional<std::vector<u64>> {
      auto q = quotient_at(p);
      if (!q) return std::nullopt;
      std::vector<u64> wp(nvars);
      for (std::size_t j = 0; j < nvars; ++j) wp[j] = modp::reduce(weights[j].get_num(), p);
      Matrix mt = combine(q->mult, wp, p);
      std::vector<std::vector<u64>> extra;
      for (std::size_t j = 0; j < nvars; ++j) {
        std::vector<u64> e(dim, 0);
        e[q->one_index] = 1;
        extra.push_back(matvec(q->mult[j], e, p));
      }
      auto kr = krylov(mt, q->one_index, extra, p);
      if (!kr) return std::nullopt;
      modp::Poly hp = kr->minpoly;
      hp.push_back(1);
      const modp::Poly dh = modp::derivative(hp, p);
      std::vector<u64> flat = kr->minpoly;
      for (auto& c : kr->coords) {
        modp::Poly gj = c;
        modp::trim(gj);
        modp::Poly num = modp::rem(modp::mul(gj, dh, p), hp, p);
        num.resize(dim, 0);
        flat.insert(flat.end(), num.begin(), num.end());
      }
      return flat;
    };
    std::vector<Rational> flat;
    try {
      flat = reconstruct_stream(compute, &cursor, &primes_used);
    } catch (const ResourceError&) {
      continue;
    }
    out.weights = weights;
    out.h = to_unipoly(flat, 0, dim, true);
    out.numerators.clear();
    for (std::size_t j = 0; j < nvars; ++j) out.numerators.push_back(to_unipoly(flat, dim * (j + 1), dim, false));
    out.primes_used = primes_used;
    if (!squarefree_mod_some_prime(out.h)) break;
    cursor = modp::prev_prime(cursor);
    bool ok = true;
    for (int extra = 0; extra < 3 && ok; ++extra) {
      ok = verify_shape_mod(out, equations, cursor);
      cursor = modp::prev_prime(cursor);
    }
    const bool exact = mode == Verification::Exact || (mode == Verification::Automatic && dim <= kExactVerifyLimit);
    out.exactly_verified = ok && exact;
    if (ok && (!exact || verify_shape(out, equations))) return out;
  }

  // No separating element: the ideal is not radical. Add squarefree minimal polynomials per variable.
  std::vector<MultiPoly> augmented = equations;
  for (std::size_t j = 0; j < nvars; ++j) {
    auto compute = [&](u64 p) -> std::optional<std::vector<u64>> {
      auto q = quotient_at(p);
      if (!q) return std::nullopt;
      auto mp = vector_minpoly(q->mult[j], q->one_index, p);
      return mp;
    };
    auto coeffs = reconstruct_stream(compute, &cursor, &primes_used);
    UniPoly mp(coeffs);
    UniPoly sq = squarefree_part(mp);
    MultiPoly gen(nvars);
    for (int k = 0; k <= sq.degree(); ++k) {
      Exponent e(nvars, 0);
      e[j] = k;
      gen.add_term(e, sq.coeff(k));
    }
    augmented.push_back(gen);
  }
  bool already = false;
  for (std::size_t i = equations.size(); i < augmented.size(); ++i)
    for (std::size_t k = 0; k < equations.size(); ++k)
      if (augmented[i] == equations[k]) already = true;
  if (already || augmented.size() > equations.size() + nvars) throw RetryExhaustedError("no separating primitive element found");
  ShapeBasis r = shape_basis(augmented, max_gamma, mode);
  r.radicalized = true;
  return r;
}

}  // namespace conserv
