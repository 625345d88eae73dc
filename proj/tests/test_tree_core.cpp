// Plane-tree value type: construction, statistics, enumeration against the
// Catalan sequence, parenthesis and contour codings, and local balls.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>

#include "treelab/counting.hpp"
#include "treelab/lattice_path.hpp"
#include "treelab/plane_tree.hpp"

using namespace treelab;

TEST_CASE("single node") {
  PlaneTree t = single_node();
  CHECK(t.size() == 1);
  CHECK(t.root_degree() == 0);
  TreeStats st = stats(t);
  CHECK(st.height == 0);
  CHECK(st.width == 1);
  CHECK(st.generation_sizes == std::vector<int>{1});
}

TEST_CASE("hand-built shapes") {
  PlaneTree cherry = from_parens("(()())");
  CHECK(cherry.size() == 3);
  CHECK(stats(cherry).height == 1);
  CHECK(stats(cherry).width == 2);
  CHECK(stats(cherry).root_degree == 2);

  PlaneTree path = from_parens("(((())))");
  CHECK(path.size() == 4);
  CHECK(stats(path).height == 3);
  CHECK(stats(path).width == 1);

  PlaneTree star = from_parens("(()()()())");
  CHECK(star.size() == 5);
  CHECK(stats(star).height == 1);
  CHECK(stats(star).width == 4);
  CHECK(stats(star).generation_sizes == std::vector<int>{1, 4});
}

TEST_CASE("enumeration counts follow the Catalan sequence") {
  const long expect[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};
  for (int n = 1; n <= 9; ++n) {
    std::vector<PlaneTree> all = enumerate_trees(n);
    CHECK(static_cast<long>(all.size()) == expect[n - 1]);
    CHECK(catalan(n - 1).get_si() == expect[n - 1]);
    // no duplicates, right sizes, all valid
    std::set<std::string> seen;
    for (const PlaneTree& t : all) {
      CHECK(t.size() == n);
      CHECK(valid_tree(t));
      seen.insert(to_parens(t));
    }
    CHECK(seen.size() == all.size());
  }
}

TEST_CASE("height census at n=6 from exhaustive enumeration") {
  // 42 six-node trees split by height as 1 + 15 + 18 + 7 + 1
  std::vector<int> by_h(6, 0);
  for (const PlaneTree& t : enumerate_trees(6)) ++by_h[static_cast<size_t>(stats(t).height)];
  CHECK(by_h == std::vector<int>{0, 1, 15, 18, 7, 1});
}

TEST_CASE("parenthesis coding round trips") {
  for (int n = 1; n <= 8; ++n)
    for (const PlaneTree& t : enumerate_trees(n)) {
      std::string s = to_parens(t);
      CHECK(static_cast<int>(s.size()) == 2 * n);
      CHECK(from_parens(s) == t);
    }
  CHECK_THROWS(from_parens("(()"));
  CHECK_THROWS(from_parens("()()"));
  CHECK_THROWS(from_parens(""));
  CHECK_THROWS(from_parens(")("));
}

TEST_CASE("contour coding round trips and reads off height") {
  for (int n = 1; n <= 7; ++n)
    for (const PlaneTree& t : enumerate_trees(n)) {
      Excursion e = to_contour(t);
      CHECK(e.length() == 2 * n - 1);
      CHECK(e.max_value() == stats(t).height);
      CHECK(from_contour(e) == t);
    }
  LatticePath bad;
  bad.steps = {-1, 1, -1};  // dips negative before the final step
  CHECK_THROWS(from_contour(bad));
  bad.steps = {1, 1, -1};  // ends at +1, not -1
  CHECK_THROWS(from_contour(bad));
  bad.steps = {1, -1};  // even length
  CHECK_THROWS(from_contour(bad));
}

TEST_CASE("node depths agree with generation sizes") {
  for (const PlaneTree& t : enumerate_trees(7)) {
    std::vector<int> depths = node_depths(t);
    TreeStats st = stats(t);
    std::vector<int> gen(static_cast<size_t>(st.height) + 1, 0);
    for (int d : depths) ++gen[static_cast<size_t>(d)];
    CHECK(gen == st.generation_sizes);
    CHECK(*std::max_element(depths.begin(), depths.end()) == st.height);
    CHECK(depths[0] == 0);
  }
}

TEST_CASE("balls truncate at the radius") {
  PlaneTree t = from_parens("(((()))(())())");  // height 3, root degree 3
  CHECK(ball(t, 0) == single_node());
  CHECK(ball(t, 1) == from_parens("(()()())"));
  CHECK(ball(t, 2) == from_parens("((())(())())"));
  CHECK(ball(t, 3) == t);
  CHECK(ball(t, 10) == t);
}

TEST_CASE("equality is structural") {
  CHECK(from_parens("((())())") == from_parens("((())())"));
  CHECK(!(from_parens("((())())") == from_parens("(()(()))")));
}
