#pragma once
// Rooted plane trees in preorder storage: node 0 is the root, children[v]
// lists v's children in order and every child index exceeds its parent's.
// Child order matters everywhere, including equality.

#include "treelab/lattice_path.hpp"

#include <string>
#include <vector>

namespace treelab {

struct PlaneTree {
  std::vector<std::vector<int>> children;

  int size() const { return static_cast<int>(children.size()); }
  int root_degree() const { return static_cast<int>(children[0].size()); }

  bool operator==(const PlaneTree&) const = default;
};

struct TreeStats {
  int height = 0;       // edges on the deepest root path
  int width = 1;        // largest generation
  int root_degree = 0;
  std::vector<int> generation_sizes;  // index = depth; sums to size
};

PlaneTree single_node();

// Checks the preorder/child-list invariants; used by parsers and tests.
bool valid_tree(const PlaneTree& t);

TreeStats stats(const PlaneTree& t);

// Depth of every node, preorder-indexed.
std::vector<int> node_depths(const PlaneTree& t);

// Truncation at depth radius, child order preserved. radius >= height gives
// the tree back; radius 0 the single node.
PlaneTree ball(const PlaneTree& t, int radius);

// Depth-first contour: +1 entering a child, -1 leaving, one trailing -1.
// Length 2n-1; its maximum equals the height.
Excursion to_contour(const PlaneTree& t);

// Inverse of to_contour; throws std::invalid_argument unless the path is an
// excursion.
PlaneTree from_contour(const LatticePath& c);

// All plane trees with n nodes, each exactly once, in a fixed order
// (first-subtree size ascending, then lexicographic in the parts).
// Serves as the brute-force oracle; n above the cap throws.
std::vector<PlaneTree> enumerate_trees(int n, int cap = 12);

// Balanced-parenthesis text form, e.g. "(()())" for the 3-node cherry.
std::string to_parens(const PlaneTree& t);
PlaneTree from_parens(const std::string& s);

}  // namespace treelab
