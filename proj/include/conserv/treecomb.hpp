#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conserv/rational.hpp"

namespace conserv {

enum class Color : std::uint8_t { White, Black };

// Bicolored plane tree: vertex ids equal indices, adjacency lists are
// counterclockwise cyclic orders.
struct PlaneTree {
  std::vector<Color> colors;
  std::vector<std::vector<int>> adjacency;

  int vertex_count() const { return static_cast<int>(colors.size()); }
  int edge_count() const;
  int degree(int v) const { return static_cast<int>(adjacency.at(static_cast<std::size_t>(v)).size()); }
  bool is_white(int v) const { return colors.at(static_cast<std::size_t>(v)) == Color::White; }
};

using TreeCode = std::string;
using TreeType = std::vector<int>;

inline constexpr int kDefaultEdgeCap = 10;
inline constexpr int kHardEdgeLimit = 14;

// Throws ValidationError unless t is a connected, properly bicolored tree with symmetric adjacency.
void validate(const PlaneTree& t);

// Traversal word rooted at the dart u -> v.
TreeCode rooted_code(const PlaneTree& t, int u, int v);
TreeCode canonical_code(const PlaneTree& t);
int aut_order(const PlaneTree& t);
TreeType tree_type(const PlaneTree& t);
std::vector<int> black_valencies(const PlaneTree& t);  // non-increasing
int edge_count_of(const TreeType& alpha);

// Number of rotations about vertex u that preserve the tree (divides deg u).
int center_order(const PlaneTree& t, int u);

std::vector<PlaneTree> enumerate_trees(int m, int cap = kDefaultEdgeCap);
std::vector<PlaneTree> trees_of_type(const TreeType& alpha, int cap = kDefaultEdgeCap);
std::vector<PlaneTree> unique_type_trees(int m, int cap = kDefaultEdgeCap);

struct CountReport {
  Integer total;
  std::vector<Integer> contributions;  // per tree, enumeration order
};
// Sum over trees with m edges of d(d-1)/|Aut| with d = m + 1.
CountReport normalized_count(int m, int cap = kDefaultEdgeCap);

// Detach the branch at donor through its neighbor `branch` and reattach it at
// receiver, inserted at position `slot` of the receiver's cyclic order.
PlaneTree branch_transplant(const PlaneTree& t, int donor, int receiver, int branch, int slot);

PlaneTree white_star(int m);
PlaneTree black_star(int m);
// Two white vertices of valencies r and s sharing one black vertex.
PlaneTree lambda_tree(int r, int s);
// Rebuild a tree from a rooted or canonical code.
PlaneTree tree_from_code(const TreeCode& code);

std::string type_to_string(const TreeType& alpha);
// Parses "3,1,1"; sorts into non-increasing order; throws ValidationError on bad input.
TreeType parse_type(const std::string& text);

}  // namespace conserv
