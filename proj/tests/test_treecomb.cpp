#include "doctest.h"

#include <set>

#include "conserv/errors.hpp"
#include "conserv/treecomb.hpp"
#include "support.hpp"

using namespace conserv;
using testsupport::brute_aut;
using testsupport::catalan;
using testsupport::equivalent;
using testsupport::random_tree;
using testsupport::scramble;

TEST_CASE("validate rejects malformed trees") {
  PlaneTree t = white_star(3);
  CHECK_NOTHROW(validate(t));
  PlaneTree same = t;
  same.colors[1] = Color::White;
  CHECK_THROWS_AS(validate(same), ValidationError);
  PlaneTree asym = t;
  asym.adjacency[1].clear();
  CHECK_THROWS_AS(validate(asym), ValidationError);
  PlaneTree cycle;
  cycle.colors = {Color::White, Color::Black, Color::White, Color::Black};
  cycle.adjacency = {{1, 3}, {0, 2}, {1, 3}, {2, 0}};
  CHECK_THROWS_AS(validate(cycle), ValidationError);
  PlaneTree lone;
  lone.colors = {Color::White};
  lone.adjacency = {{}};
  CHECK_THROWS_AS(validate(lone), ValidationError);
}

TEST_CASE("codes of small trees") {
  CHECK(canonical_code(white_star(1)) == "w(b())");
  CHECK(canonical_code(black_star(1)) == "w(b())");
  PlaneTree path;
  path.colors = {Color::White, Color::Black, Color::White, Color::Black};
  path.adjacency = {{1}, {0, 2}, {1, 3}, {2}};
  CHECK(canonical_code(white_star(3)) != canonical_code(path));
  const auto two = trees_of_type({3, 1, 1});
  REQUIRE(two.size() == 2);
  CHECK(canonical_code(two[0]) != canonical_code(two[1]));
}

TEST_CASE("automorphism orders") {
  for (int m = 1; m <= 7; ++m) {
    CHECK(aut_order(white_star(m)) == m);
    CHECK(aut_order(black_star(m)) == m);
  }
  for (int r = 1; r <= 5; ++r)
    for (int s = 1; s <= 5; ++s)
      if (r != s) CHECK(aut_order(lambda_tree(r, s)) == 1);
  // Type <2,1,1>: one tree has a half-turn symmetry, the other none.
  std::multiset<int> auts;
  for (const auto& t : trees_of_type({2, 1, 1})) auts.insert(aut_order(t));
  CHECK(auts == std::multiset<int>{1, 2});
}

TEST_CASE("types") {
  CHECK(tree_type(white_star(5)) == TreeType{5});
  CHECK(tree_type(black_star(4)) == TreeType{1, 1, 1, 1});
  CHECK(tree_type(lambda_tree(2, 4)) == TreeType{4, 2});
  CHECK(black_valencies(lambda_tree(2, 4)) == std::vector<int>{2, 1, 1, 1, 1});
  CHECK(parse_type("1,3,1") == TreeType{3, 1, 1});
  CHECK_THROWS_AS(parse_type("3,,1"), ValidationError);
  CHECK_THROWS_AS(parse_type("0"), ValidationError);
  CHECK_THROWS_AS(parse_type("a"), ValidationError);
}

TEST_CASE("enumeration is complete and irredundant") {
  const std::vector<std::size_t> sizes{1, 2, 3, 6};
  for (int m = 1; m <= 8; ++m) {
    const auto trees = enumerate_trees(m);
    if (m <= 4) CHECK(trees.size() == sizes[static_cast<std::size_t>(m - 1)]);
    // Edge-rooted trees: Aut acts freely on the m edges of each class.
    unsigned long rooted = 0;
    for (const auto& t : trees) {
      CHECK(t.edge_count() == m);
      CHECK(aut_order(t) == brute_aut(t));
      rooted += static_cast<unsigned long>(m / aut_order(t));
    }
    CHECK(rooted == catalan(m));
    if (m <= 6)
      for (std::size_t i = 0; i < trees.size(); ++i)
        for (std::size_t j = i + 1; j < trees.size(); ++j) CHECK_FALSE(equivalent(trees[i], trees[j]));
  }
}

TEST_CASE("normalized counts") {
  const auto r3 = normalized_count(3);
  CHECK(r3.total == 20);
  std::multiset<long> parts;
  for (const auto& c : r3.contributions) parts.insert(c.get_si());
  CHECK(parts == std::multiset<long>{4, 4, 12});
  CHECK(normalized_count(1).total == 2);
  CHECK(normalized_count(5).total == 252);
  for (int m = 1; m <= 9; ++m) CHECK(normalized_count(m).total == binomial(2ul * static_cast<unsigned long>(m), static_cast<unsigned long>(m)));
}

TEST_CASE("edge cap") {
  CHECK_THROWS_AS(enumerate_trees(11), ResourceError);
  CHECK_THROWS_AS(enumerate_trees(3, kHardEdgeLimit + 1), ValidationError);
  CHECK_THROWS_AS(enumerate_trees(0), ValidationError);
}

TEST_CASE("unique types") {
  auto codes = [](const std::vector<PlaneTree>& ts) {
    std::set<TreeCode> out;
    for (const auto& t : ts) out.insert(canonical_code(t));
    return out;
  };
  CHECK(codes(unique_type_trees(2)) == std::set<TreeCode>{canonical_code(white_star(2)), canonical_code(lambda_tree(1, 1))});
  CHECK(codes(unique_type_trees(5)) ==
        std::set<TreeCode>{canonical_code(white_star(5)), canonical_code(black_star(5)), canonical_code(lambda_tree(1, 4)),
                           canonical_code(lambda_tree(2, 3))});
  for (const auto& t : unique_type_trees(5)) CHECK(tree_type(t) != TreeType{3, 1, 1});
}

TEST_CASE("code round trip") {
  for (int m = 1; m <= 6; ++m)
    for (const auto& t : enumerate_trees(m)) {
      const auto code = canonical_code(t);
      CHECK(canonical_code(tree_from_code(code)) == code);
    }
  CHECK_THROWS_AS(tree_from_code("w(b("), ValidationError);
  CHECK_THROWS_AS(tree_from_code("w(w())"), ValidationError);
  CHECK_THROWS_AS(tree_from_code("x()"), ValidationError);
}

TEST_CASE("property: canonical code is a class function") {
  for (int trial = 0; trial < 300; ++trial) {
    const PlaneTree t = random_tree(testsupport::uniform(1, 11));
    const PlaneTree u = scramble(t);
    CHECK(canonical_code(t) == canonical_code(u));
    CHECK(aut_order(t) == aut_order(u));
    CHECK(equivalent(t, u));
    CHECK(canonical_code(tree_from_code(canonical_code(t))) == canonical_code(t));
  }
}

TEST_CASE("property: codes separate inequivalent trees") {
  for (int trial = 0; trial < 300; ++trial) {
    const int m = testsupport::uniform(2, 7);
    const PlaneTree a = random_tree(m), b = random_tree(m);
    CHECK((canonical_code(a) == canonical_code(b)) == equivalent(a, b));
    CHECK(aut_order(a) == brute_aut(a));
  }
}

TEST_CASE("branch transplant") {
  // Black vertex 2 joins two whites; move a leaf branch between black vertices.
  PlaneTree t = lambda_tree(2, 2);
  const int m = t.edge_count();
  // Vertex 3 is a black leaf on white 0; vertex 4 is a black leaf on white 1.
  CHECK_THROWS_AS(branch_transplant(t, 3, 4, 0, 0), InvalidMoveError);  // donor of valency 1
  CHECK_THROWS_AS(branch_transplant(t, 2, 2, 0, 0), InvalidMoveError);
  CHECK_THROWS_AS(branch_transplant(t, 0, 2, 3, 0), InvalidMoveError);  // white donor
  // Moving the branch through white 1 from black 2 to black 4 carries 4 along.
  CHECK_THROWS_AS(branch_transplant(t, 2, 4, 1, 0), InvalidMoveError);
  const PlaneTree moved = branch_transplant(t, 2, 3, 1, 1);
  CHECK(moved.edge_count() == m);
  CHECK(tree_type(moved) == tree_type(t));
  CHECK(black_valencies(moved) == std::vector<int>{2, 1, 1});
  const PlaneTree back = branch_transplant(moved, 3, 2, 1, 1);
  CHECK(canonical_code(back) == canonical_code(t));
}

TEST_CASE("property: transplant preserves type and inverts") {
  int done = 0;
  for (int trial = 0; trial < 2000 && done < 200; ++trial) {
    const PlaneTree t = random_tree(testsupport::uniform(3, 9));
    std::vector<int> blacks;
    for (int v = 0; v < t.vertex_count(); ++v)
      if (!t.is_white(v)) blacks.push_back(v);
    if (blacks.size() < 2) continue;
    const int donor = blacks[static_cast<std::size_t>(testsupport::uniform(0, static_cast<int>(blacks.size()) - 1))];
    const int receiver = blacks[static_cast<std::size_t>(testsupport::uniform(0, static_cast<int>(blacks.size()) - 1))];
    if (donor == receiver || t.degree(donor) < 2) continue;
    const auto& dn = t.adjacency[static_cast<std::size_t>(donor)];
    const int pos = testsupport::uniform(0, static_cast<int>(dn.size()) - 1);
    const int branch = dn[static_cast<std::size_t>(pos)];
    const int slot = testsupport::uniform(0, t.degree(receiver));
    PlaneTree moved;
    try {
      moved = branch_transplant(t, donor, receiver, branch, slot);
    } catch (const InvalidMoveError&) {
      continue;
    }
    ++done;
    CHECK(tree_type(moved) == tree_type(t));
    std::vector<int> before = black_valencies(t), after = black_valencies(moved);
    CHECK(std::accumulate(before.begin(), before.end(), 0) == std::accumulate(after.begin(), after.end(), 0));
    // Reinsert at the old position (the slot index counts the donor's order after removal).
    const PlaneTree back = branch_transplant(moved, receiver, donor, branch, pos);
    CHECK(canonical_code(back) == canonical_code(t));
  }
  CHECK(done >= 100);
}

TEST_CASE("center order") {
  CHECK(center_order(white_star(6), 0) == 6);
  CHECK(center_order(lambda_tree(3, 3), 2) == 2);
  CHECK(center_order(lambda_tree(3, 2), 2) == 1);
}
