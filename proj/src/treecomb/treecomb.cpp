#include "conserv/treecomb.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "conserv/errors.hpp"

namespace conserv {

int PlaneTree::edge_count() const {
  std::size_t half = 0;
  for (const auto& a : adjacency) half += a.size();
  return static_cast<int>(half / 2);
}

void validate(const PlaneTree& t) {
  const int n = t.vertex_count();
  if (n < 2) throw ValidationError("a tree needs at least one edge");
  if (t.adjacency.size() != t.colors.size()) throw ValidationError("adjacency and color arrays differ in length");
  for (int u = 0; u < n; ++u) {
    std::set<int> seen;
    for (int v : t.adjacency[static_cast<std::size_t>(u)]) {
      if (v < 0 || v >= n) throw ValidationError("neighbor id out of range");
      if (!seen.insert(v).second) throw ValidationError("repeated neighbor in a cyclic order");
      if (t.colors[static_cast<std::size_t>(u)] == t.colors[static_cast<std::size_t>(v)]) throw ValidationError("edge joins vertices of the same color");
      const auto& back = t.adjacency[static_cast<std::size_t>(v)];
      if (std::find(back.begin(), back.end(), u) == back.end()) throw ValidationError("adjacency is not symmetric");
    }
  }
  if (t.edge_count() != n - 1) throw ValidationError("edge count must be vertex count minus one");
  std::vector<bool> reached(static_cast<std::size_t>(n), false);
  std::vector<int> stack{0};
  reached[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : t.adjacency[static_cast<std::size_t>(u)])
      if (!reached[static_cast<std::size_t>(v)]) {
        reached[static_cast<std::size_t>(v)] = true;
        ++count;
        stack.push_back(v);
      }
  }
  if (count != n) throw ValidationError("graph is not connected");
}

namespace {

char color_mark(const PlaneTree& t, int v) { return t.is_white(v) ? 'w' : 'b'; }

void encode(const PlaneTree& t, int x, int parent, std::string& out) {
  out += color_mark(t, x);
  out += '(';
  const auto& nb = t.adjacency[static_cast<std::size_t>(x)];
  const std::size_t n = nb.size();
  const std::size_t at = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), parent) - nb.begin());
  for (std::size_t k = 1; k < n; ++k) encode(t, nb[(at + k) % n], x, out);
  out += ')';
}

std::vector<std::pair<int, int>> white_darts(const PlaneTree& t) {
  std::vector<std::pair<int, int>> darts;
  for (int u = 0; u < t.vertex_count(); ++u)
    if (t.is_white(u))
      for (int v : t.adjacency[static_cast<std::size_t>(u)]) darts.emplace_back(u, v);
  return darts;
}

}  // namespace

TreeCode rooted_code(const PlaneTree& t, int u, int v) {
  const auto& nb = t.adjacency.at(static_cast<std::size_t>(u));
  auto it = std::find(nb.begin(), nb.end(), v);
  if (it == nb.end()) throw ValidationError("rooting dart is not an edge");
  std::string out;
  out += color_mark(t, u);
  out += '(';
  const std::size_t n = nb.size();
  const std::size_t at = static_cast<std::size_t>(it - nb.begin());
  for (std::size_t k = 0; k < n; ++k) encode(t, nb[(at + k) % n], u, out);
  out += ')';
  return out;
}

TreeCode canonical_code(const PlaneTree& t) {
  validate(t);
  TreeCode best;
  for (auto [u, v] : white_darts(t)) {
    TreeCode c = rooted_code(t, u, v);
    if (best.empty() || c < best) best = std::move(c);
  }
  return best;
}

int aut_order(const PlaneTree& t) {
  const TreeCode best = canonical_code(t);
  int count = 0;
  for (auto [u, v] : white_darts(t))
    if (rooted_code(t, u, v) == best) ++count;
  return count;
}

TreeType tree_type(const PlaneTree& t) {
  TreeType alpha;
  for (int v = 0; v < t.vertex_count(); ++v)
    if (t.is_white(v)) alpha.push_back(t.degree(v));
  std::sort(alpha.rbegin(), alpha.rend());
  return alpha;
}

std::vector<int> black_valencies(const PlaneTree& t) {
  std::vector<int> beta;
  for (int v = 0; v < t.vertex_count(); ++v)
    if (!t.is_white(v)) beta.push_back(t.degree(v));
  std::sort(beta.rbegin(), beta.rend());
  return beta;
}

int edge_count_of(const TreeType& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

int center_order(const PlaneTree& t, int u) {
  const auto& nb = t.adjacency.at(static_cast<std::size_t>(u));
  if (nb.empty()) return 1;
  const TreeCode first = rooted_code(t, u, nb.front());
  int count = 0;
  for (int v : nb)
    if (rooted_code(t, u, v) == first) ++count;
  return count;
}

namespace {

void check_cap(int m, int cap) {
  if (m < 1) throw ValidationError("edge count must be positive");
  if (cap > kHardEdgeLimit) throw ValidationError("edge cap exceeds the hard limit of " + std::to_string(kHardEdgeLimit));
  if (m > cap) throw ResourceError("edge count " + std::to_string(m) + " exceeds the enumeration cap of " + std::to_string(cap));
}

// All Dyck words of semilength m ('(' opens a child edge).
void dyck_words(int m, std::string& cur, int open, int closed, std::vector<std::string>& out) {
  if (closed == m) {
    out.push_back(cur);
    return;
  }
  if (open < m) {
    cur.push_back('(');
    dyck_words(m, cur, open + 1, closed, out);
    cur.pop_back();
  }
  if (closed < open) {
    cur.push_back(')');
    dyck_words(m, cur, open, closed + 1, out);
    cur.pop_back();
  }
}

PlaneTree from_dyck(const std::string& word, Color root) {
  PlaneTree t;
  t.colors.push_back(root);
  t.adjacency.emplace_back();
  std::vector<int> path{0};
  for (char c : word) {
    if (c == '(') {
      int parent = path.back();
      int v = t.vertex_count();
      Color col = t.colors[static_cast<std::size_t>(parent)] == Color::White ? Color::Black : Color::White;
      t.colors.push_back(col);
      t.adjacency.push_back({parent});
      t.adjacency[static_cast<std::size_t>(parent)].push_back(v);
      path.push_back(v);
    } else {
      path.pop_back();
    }
  }
  return t;
}

}  // namespace

std::vector<PlaneTree> enumerate_trees(int m, int cap) {
  check_cap(m, cap);
  std::vector<std::string> words;
  std::string cur;
  dyck_words(m, cur, 0, 0, words);
  std::map<TreeCode, PlaneTree> classes;
  for (const auto& w : words)
    for (Color root : {Color::White, Color::Black}) {
      PlaneTree t = from_dyck(w, root);
      TreeCode code = canonical_code(t);
      if (!classes.count(code)) classes.emplace(code, tree_from_code(code));
    }
  std::vector<PlaneTree> out;
  out.reserve(classes.size());
  for (auto& [code, t] : classes) out.push_back(std::move(t));
  return out;
}

std::vector<PlaneTree> trees_of_type(const TreeType& alpha, int cap) {
  std::vector<PlaneTree> out;
  for (auto& t : enumerate_trees(edge_count_of(alpha), cap))
    if (tree_type(t) == alpha) out.push_back(std::move(t));
  return out;
}

std::vector<PlaneTree> unique_type_trees(int m, int cap) {
  auto all = enumerate_trees(m, cap);
  std::map<TreeType, int> counts;
  for (const auto& t : all) ++counts[tree_type(t)];
  std::vector<PlaneTree> out;
  for (auto& t : all)
    if (counts[tree_type(t)] == 1) out.push_back(std::move(t));
  return out;
}

CountReport normalized_count(int m, int cap) {
  CountReport r;
  r.total = 0;
  const long d = m + 1;
  for (const auto& t : enumerate_trees(m, cap)) {
    const long aut = aut_order(t);
    if ((d * (d - 1)) % aut != 0) throw InternalError("non-integer per-tree count: automorphism order " + std::to_string(aut));
    Integer c = d * (d - 1) / aut;
    r.contributions.push_back(c);
    r.total += c;
  }
  return r;
}

PlaneTree branch_transplant(const PlaneTree& t, int donor, int receiver, int branch, int slot) {
  validate(t);
  const int n = t.vertex_count();
  auto in_range = [n](int v) { return v >= 0 && v < n; };
  if (!in_range(donor) || !in_range(receiver) || !in_range(branch)) throw ValidationError("vertex id out of range");
  if (donor == receiver) throw InvalidMoveError("donor and receiver must differ");
  if (t.is_white(donor) || t.is_white(receiver)) throw InvalidMoveError("donor and receiver must be black");
  const auto& dn = t.adjacency[static_cast<std::size_t>(donor)];
  auto it = std::find(dn.begin(), dn.end(), branch);
  if (it == dn.end()) throw InvalidMoveError("branch is not a neighbor of the donor");
  if (dn.size() == 1) throw InvalidMoveError("donor has valency 1");
  if (slot < 0 || slot > t.degree(receiver)) throw ValidationError("insertion slot out of range");
  // The branch is the component of `branch` after cutting the donor edge.
  std::vector<bool> in_branch(static_cast<std::size_t>(n), false);
  std::vector<int> stack{branch};
  in_branch[static_cast<std::size_t>(branch)] = true;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : t.adjacency[static_cast<std::size_t>(u)]) {
      if (v == donor && u == branch) continue;
      if (!in_branch[static_cast<std::size_t>(v)]) {
        in_branch[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  if (in_branch[static_cast<std::size_t>(receiver)]) throw InvalidMoveError("branch contains the donor-receiver path");
  PlaneTree out = t;
  auto& d_adj = out.adjacency[static_cast<std::size_t>(donor)];
  d_adj.erase(std::find(d_adj.begin(), d_adj.end(), branch));
  auto& b_adj = out.adjacency[static_cast<std::size_t>(branch)];
  *std::find(b_adj.begin(), b_adj.end(), donor) = receiver;
  auto& r_adj = out.adjacency[static_cast<std::size_t>(receiver)];
  r_adj.insert(r_adj.begin() + slot, branch);
  validate(out);
  return out;
}

PlaneTree white_star(int m) {
  if (m < 1) throw ValidationError("star needs at least one edge");
  PlaneTree t;
  t.colors.push_back(Color::White);
  t.adjacency.emplace_back();
  for (int i = 1; i <= m; ++i) {
    t.colors.push_back(Color::Black);
    t.adjacency.push_back({0});
    t.adjacency[0].push_back(i);
  }
  return t;
}

PlaneTree black_star(int m) {
  PlaneTree t = white_star(m);
  for (auto& c : t.colors) c = c == Color::White ? Color::Black : Color::White;
  return t;
}

PlaneTree lambda_tree(int r, int s) {
  if (r < 1 || s < 1) throw ValidationError("lambda tree needs r, s >= 1");
  // Vertex 0: white of valency r; vertex 1: white of valency s; vertex 2: the shared black vertex.
  PlaneTree t;
  t.colors = {Color::White, Color::White, Color::Black};
  t.adjacency = {{2}, {2}, {0, 1}};
  auto add_leaf = [&t](int w) {
    int v = t.vertex_count();
    t.colors.push_back(Color::Black);
    t.adjacency.push_back({w});
    t.adjacency[static_cast<std::size_t>(w)].push_back(v);
  };
  for (int i = 1; i < r; ++i) add_leaf(0);
  for (int i = 1; i < s; ++i) add_leaf(1);
  return t;
}

PlaneTree tree_from_code(const TreeCode& code) {
  PlaneTree t;
  std::vector<int> path;
  for (std::size_t i = 0; i < code.size(); ++i) {
    char c = code[i];
    if (c == 'w' || c == 'b') {
      if (i + 1 >= code.size() || code[i + 1] != '(') throw ValidationError("malformed tree code");
      int v = t.vertex_count();
      t.colors.push_back(c == 'w' ? Color::White : Color::Black);
      t.adjacency.emplace_back();
      if (!path.empty()) {
        int parent = path.back();
        t.adjacency[static_cast<std::size_t>(v)].push_back(parent);
        t.adjacency[static_cast<std::size_t>(parent)].push_back(v);
      }
      path.push_back(v);
      ++i;
    } else if (c == ')') {
      if (path.empty()) throw ValidationError("malformed tree code");
      path.pop_back();
    } else {
      throw ValidationError("unexpected character in tree code");
    }
  }
  if (!path.empty()) throw ValidationError("unbalanced tree code");
  validate(t);
  return t;
}

std::string type_to_string(const TreeType& alpha) {
  std::ostringstream os;
  for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
  return os.str();
}

TreeType parse_type(const std::string& text) {
  TreeType alpha;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789 ") != std::string::npos) throw ValidationError("bad tree type '" + text + "'");
    int v = std::stoi(item);
    if (v < 1) throw ValidationError("tree type entries must be positive");
    alpha.push_back(v);
  }
  if (alpha.empty()) throw ValidationError("empty tree type");
  std::sort(alpha.rbegin(), alpha.rend());
  return alpha;
}

}  // namespace conserv
