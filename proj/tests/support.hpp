#pragma once
// Generators and brute-force oracles shared by the test suites.
#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "conserv/treecomb.hpp"

namespace testsupport {

using conserv::Color;
using conserv::PlaneTree;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed1234u);
  return gen;
}

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

// Random plane tree with m edges: each new vertex hangs off a uniform earlier
// vertex at a uniform position of its cyclic order.
inline PlaneTree random_tree(int m) {
  PlaneTree t;
  t.colors.push_back(uniform(0, 1) ? Color::White : Color::Black);
  t.adjacency.emplace_back();
  for (int i = 1; i <= m; ++i) {
    const int parent = uniform(0, t.vertex_count() - 1);
    t.colors.push_back(t.is_white(parent) ? Color::Black : Color::White);
    t.adjacency.push_back({parent});
    auto& adj = t.adjacency[static_cast<std::size_t>(parent)];
    adj.insert(adj.begin() + uniform(0, static_cast<int>(adj.size())), i);
  }
  return t;
}

// Same tree with relabeled vertices and every cyclic order rotated.
inline PlaneTree scramble(const PlaneTree& t) {
  const int n = t.vertex_count();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng());
  PlaneTree out;
  out.colors.resize(static_cast<std::size_t>(n));
  out.adjacency.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const auto pv = static_cast<std::size_t>(perm[static_cast<std::size_t>(v)]);
    out.colors[pv] = t.colors[static_cast<std::size_t>(v)];
    auto adj = t.adjacency[static_cast<std::size_t>(v)];
    for (auto& w : adj) w = perm[static_cast<std::size_t>(w)];
    if (!adj.empty()) std::rotate(adj.begin(), adj.begin() + uniform(0, static_cast<int>(adj.size()) - 1), adj.end());
    out.adjacency[pv] = adj;
  }
  return out;
}

// Tries to extend the dart map (u1 -> v1) to (u2 -> v2) to a color and cyclic-order
// preserving bijection.
inline bool maps_onto(const PlaneTree& a, int u1, int v1, const PlaneTree& b, int u2, int v2) {
  if (a.vertex_count() != b.vertex_count()) return false;
  std::vector<int> image(static_cast<std::size_t>(a.vertex_count()), -1);
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> stack{{{u1, v1}, {u2, v2}}};
  image[static_cast<std::size_t>(u1)] = u2;
  while (!stack.empty()) {
    auto [da, db] = stack.back();
    stack.pop_back();
    const auto [x, y] = da;
    const auto [p, q] = db;
    if (a.colors[static_cast<std::size_t>(x)] != b.colors[static_cast<std::size_t>(p)]) return false;
    const auto& na = a.adjacency[static_cast<std::size_t>(x)];
    const auto& nb = b.adjacency[static_cast<std::size_t>(p)];
    if (na.size() != nb.size()) return false;
    const auto ia = static_cast<std::size_t>(std::find(na.begin(), na.end(), y) - na.begin());
    const auto ib = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), q) - nb.begin());
    for (std::size_t k = 0; k < na.size(); ++k) {
      const int wa = na[(ia + k) % na.size()], wb = nb[(ib + k) % nb.size()];
      auto& im = image[static_cast<std::size_t>(wa)];
      if (im == -1) {
        im = wb;
        stack.push_back({{wa, x}, {wb, p}});
      } else if (im != wb) {
        return false;
      }
    }
  }
  return true;
}

inline std::vector<std::pair<int, int>> darts_from_white(const PlaneTree& t) {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < t.vertex_count(); ++u)
    if (t.is_white(u))
      for (int v : t.adjacency[static_cast<std::size_t>(u)]) out.emplace_back(u, v);
  return out;
}

inline bool equivalent(const PlaneTree& a, const PlaneTree& b) {
  const auto da = darts_from_white(a);
  if (da.empty()) return false;
  for (auto [u, v] : darts_from_white(b))
    if (maps_onto(a, da.front().first, da.front().second, b, u, v)) return true;
  return false;
}

inline int brute_aut(const PlaneTree& t) {
  const auto d = darts_from_white(t);
  int count = 0;
  for (auto [u, v] : d)
    if (maps_onto(t, d.front().first, d.front().second, t, u, v)) ++count;
  return count;
}

inline unsigned long catalan(int m) {
  unsigned long c = 1;
  for (int i = 0; i < m; ++i) c = c * 2 * (2 * static_cast<unsigned long>(i) + 1) / (static_cast<unsigned long>(i) + 2);
  return c;
}

}  // namespace testsupport
