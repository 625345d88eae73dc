#include "treelab/plane_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace treelab {

PlaneTree single_node() {
  PlaneTree t;
  t.children.resize(1);
  return t;
}

bool valid_tree(const PlaneTree& t) {
  int n = t.size();
  if (n < 1) return false;
  std::vector<int> parent(n, -1);
  for (int v = 0; v < n; ++v)
    for (int c : t.children[v]) {
      if (c <= v || c >= n || parent[c] != -1) return false;
      parent[c] = v;
    }
  for (int v = 1; v < n; ++v)
    if (parent[v] == -1) return false;
  // preorder: each node's subtree occupies a contiguous index range
  std::vector<int> order;
  order.reserve(n);
  std::vector<std::pair<int, size_t>> stack{{0, 0}};
  order.push_back(0);
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i == t.children[v].size()) {
      stack.pop_back();
      continue;
    }
    int c = t.children[v][i++];
    order.push_back(c);
    stack.push_back({c, 0});
  }
  for (int v = 0; v < n; ++v)
    if (order[v] != v) return false;
  return true;
}

std::vector<int> node_depths(const PlaneTree& t) {
  std::vector<int> depth(t.size(), 0);
  for (int v = 0; v < t.size(); ++v)
    for (int c : t.children[v]) depth[c] = depth[v] + 1;
  return depth;
}

TreeStats stats(const PlaneTree& t) {
  std::vector<int> depth = node_depths(t);
  int h = *std::max_element(depth.begin(), depth.end());
  TreeStats s;
  s.height = h;
  s.root_degree = t.root_degree();
  s.generation_sizes.assign(h + 1, 0);
  for (int d : depth) ++s.generation_sizes[d];
  s.width = *std::max_element(s.generation_sizes.begin(), s.generation_sizes.end());
  return s;
}

PlaneTree ball(const PlaneTree& t, int radius) {
  std::vector<int> depth = node_depths(t);
  std::vector<int> remap(t.size(), -1);
  int next = 0;
  for (int v = 0; v < t.size(); ++v)
    if (depth[v] <= radius) remap[v] = next++;
  PlaneTree b;
  b.children.resize(next);
  for (int v = 0; v < t.size(); ++v) {
    if (remap[v] < 0) continue;
    for (int c : t.children[v])
      if (remap[c] >= 0) b.children[remap[v]].push_back(remap[c]);
  }
  return b;
}

Excursion to_contour(const PlaneTree& t) {
  Excursion e;
  e.start = 0;
  e.steps.reserve(2 * t.size() - 1);
  // iterative DFS: +1 entering each child, -1 leaving it
  std::vector<std::pair<int, size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i == t.children[v].size()) {
      stack.pop_back();
      e.steps.push_back(-1);  // leaving v (the final -1 for the root)
      continue;
    }
    int c = t.children[v][i++];
    e.steps.push_back(+1);
    stack.push_back({c, 0});
  }
  return e;
}

PlaneTree from_contour(const LatticePath& c) {
  if (!is_excursion(c)) throw std::invalid_argument("from_contour: not an excursion");
  PlaneTree t;
  t.children.resize((c.length() + 1) / 2);
  int next = 1;
  std::vector<int> stack{0};
  for (int i = 0; i + 1 < c.length(); ++i) {
    if (c.steps[i] > 0) {
      t.children[stack.back()].push_back(next);
      stack.push_back(next++);
    } else {
      stack.pop_back();
    }
  }
  return t;
}

namespace {

// first subtree of size j grafted before the root children of rest
PlaneTree graft_first(const PlaneTree& first, const PlaneTree& rest) {
  int j = first.size();
  PlaneTree t;
  t.children.resize(1 + j + rest.size() - 1);
  t.children[0].push_back(1);
  for (int v = 0; v < j; ++v)
    for (int c : first.children[v]) t.children[v + 1].push_back(c + 1);
  for (int c : rest.children[0]) t.children[0].push_back(c + j);
  for (int v = 1; v < rest.size(); ++v)
    for (int c : rest.children[v]) t.children[v + j].push_back(c + j);
  return t;
}

}  // namespace

std::vector<PlaneTree> enumerate_trees(int n, int cap) {
  if (n < 1) throw std::invalid_argument("enumerate_trees: n must be positive");
  if (n > cap) throw std::invalid_argument("enumerate_trees: n exceeds the cap");
  std::vector<std::vector<PlaneTree>> memo(n + 1);
  memo[1] = {single_node()};
  for (int sz = 2; sz <= n; ++sz)
    for (int j = 1; j < sz; ++j)
      for (const PlaneTree& first : memo[j])
        for (const PlaneTree& rest : memo[sz - j])
          memo[sz].push_back(graft_first(first, rest));
  return memo[n];
}

std::string to_parens(const PlaneTree& t) {
  std::string s;
  std::vector<std::pair<int, size_t>> stack{{0, 0}};
  s += '(';
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i == t.children[v].size()) {
      stack.pop_back();
      s += ')';
      continue;
    }
    int c = t.children[v][i++];
    s += '(';
    stack.push_back({c, 0});
  }
  return s;
}

PlaneTree from_parens(const std::string& s) {
  if (s.empty() || s.front() != '(')
    throw std::invalid_argument("tree string must start with '('");
  PlaneTree t;
  std::vector<int> stack;
  int next = 0;
  for (char ch : s) {
    if (ch == '(') {
      t.children.emplace_back();
      if (!stack.empty()) t.children[stack.back()].push_back(next);
      stack.push_back(next++);
    } else if (ch == ')') {
      if (stack.empty()) throw std::invalid_argument("unbalanced tree string");
      stack.pop_back();
    } else {
      throw std::invalid_argument("tree string: expected only parentheses");
    }
  }
  if (!stack.empty()) throw std::invalid_argument("unbalanced tree string");
  if (!valid_tree(t)) throw std::invalid_argument("tree string: multiple roots");
  return t;
}

}  // namespace treelab
