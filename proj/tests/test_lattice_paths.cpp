// Lattice-path kit: excursion validation, the cycle-shift map with its
// exhaustively checked fibers, the reflection bijection, the width
// functional, uniform bridge and excursion samplers, and the text coding.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "treelab/lattice_path.hpp"
#include "treelab/plane_tree.hpp"
#include "treelab/stat_tests.hpp"

using namespace treelab;

namespace {

// All start-0 walks of the given length, as bitmask-decoded step vectors.
std::vector<LatticePath> all_walks(int length) {
  std::vector<LatticePath> out;
  for (uint32_t mask = 0; mask < (1u << length); ++mask) {
    LatticePath p;
    p.steps.reserve(length);
    for (int t = 0; t < length; ++t)
      p.steps.push_back((mask >> t) & 1 ? +1 : -1);
    out.push_back(std::move(p));
  }
  return out;
}

bool visits(const LatticePath& p, int level) {
  for (int v : p.values())
    if (v == level) return true;
  return false;
}

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("excursion validation") {
  LatticePath p;
  p.steps = {-1};
  CHECK(is_excursion(p));  // single-node contour
  p.steps = {1, -1, -1};
  CHECK(is_excursion(p));
  p.steps = {1, 1, -1, -1, -1};
  CHECK(is_excursion(p));
  p.steps = {1, -1};  // even length
  CHECK(!is_excursion(p));
  p.steps = {-1, 1, -1};  // negative before the final step
  CHECK(!is_excursion(p));
  p.steps = {1, 1, -1};  // ends at +1
  CHECK(!is_excursion(p));
  CHECK_THROWS(make_excursion(p));
  p.steps = {1, -1, -1};
  p.start = 1;  // wrong start
  CHECK(!is_excursion(p));
}

TEST_CASE("cycle map: exhaustive fibers for small lengths") {
  for (int n = 2; n <= 5; ++n) {
    const int k = 2 * n - 1;
    std::map<std::string, int> fiber;
    long long bridges = 0, fixed = 0;
    for (const LatticePath& w : all_walks(k)) {
      if (w.end_value() != -1) continue;
      ++bridges;
      Excursion e = cycle_map(w);
      CHECK(is_excursion(e));
      ++fiber[to_ud_string(e)];
      // the image is one of the k cyclic step rotations of the input
      bool rotation = false;
      for (int r = 0; r < k && !rotation; ++r) {
        bool same = true;
        for (int t = 0; t < k && same; ++t) same = e.steps[t] == w.steps[(r + t) % k];
        rotation = same;
      }
      CHECK(rotation);
      if (is_excursion(w)) {
        CHECK(e.steps == w.steps);
        ++fixed;
      }
    }
    CHECK(bridges == binom(k, n - 1));
    CHECK(static_cast<long long>(fiber.size()) == bridges / k);
    CHECK(fixed == bridges / k);  // one excursion per fiber, each a fixed point
    for (const auto& [key, count] : fiber) CHECK(count == k);
  }
}

TEST_CASE("reflection bijection: involution and image characterization") {
  for (int length = 1; length <= 10; ++length) {
    // forward images grouped by the endpoint x of the input bridge
    std::map<int, std::set<std::string>> images;
    std::map<int, long long> inputs;
    for (const LatticePath& w : all_walks(length)) {
      int x = w.end_value();
      if (x < 0) continue;
      LatticePath img = cut_bijection(w, x);
      CHECK(img.start == 0);
      CHECK(img.end_value() == (x % 2 == 1 ? -1 : 0));
      CHECK(visits(img, x / 2));
      LatticePath back = cut_bijection(img, x);
      CHECK(back == w);
      images[x].insert(to_ud_string(img));
      ++inputs[x];
    }
    // each image set is exactly the constrained bridge family for that x
    for (const auto& [x, set] : images) {
      CHECK(static_cast<long long>(set.size()) == inputs[x]);  // injective
      std::set<std::string> expect;
      for (const LatticePath& w : all_walks(length))
        if (w.end_value() == (x % 2 == 1 ? -1 : 0) && visits(w, x / 2))
          expect.insert(to_ud_string(w));
      CHECK(set == expect);
    }
  }
}

TEST_CASE("reflection bijection rejects bad inputs") {
  LatticePath w;
  w.steps = {1, -1, 1, 1};
  w.start = 1;
  CHECK_THROWS(cut_bijection(w, 2));  // start must be 0
  w.start = 0;
  CHECK_THROWS(cut_bijection(w, 1));  // length 4 vs odd x
  LatticePath low = from_ud_string("DDUU");
  CHECK_THROWS(cut_bijection(low, 4));  // never reaches level 2
}

TEST_CASE("path width equals tree width on contours") {
  for (int n = 2; n <= 7; ++n)
    for (const PlaneTree& t : enumerate_trees(n))
      CHECK(path_width(to_contour(t)) == static_cast<double>(stats(t).width));
  CHECK(path_width(LatticePath{}) == 0.0);
  CHECK(path_width(from_ud_string("U")) == 0.0);
  CHECK(path_width(from_ud_string("UDUD")) == 2.0);  // level 0-1 gap crossed 4 times
}

TEST_CASE("uniform bridge hits every path with equal frequency") {
  RngStream rng(987, 0);
  std::map<std::string, int64_t> counts;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    LatticePath p = uniform_bridge(5, -1, rng);
    CHECK(p.length() == 5);
    CHECK(p.end_value() == -1);
    ++counts[to_ud_string(p)];
  }
  CHECK(counts.size() == 10);  // choose(5,2) bridges
  std::vector<double> expected(counts.size(), draws / 10.0);
  std::vector<int64_t> observed;
  for (const auto& [key, c] : counts) observed.push_back(c);
  CHECK(chi_square_pvalue(expected, observed) > 1e-4);

  RngStream a(42, 7), b(42, 7);
  CHECK(uniform_bridge(9, 1, a) == uniform_bridge(9, 1, b));

  CHECK_THROWS(uniform_bridge(5, 0, rng));   // parity
  CHECK_THROWS(uniform_bridge(3, 5, rng));   // out of range
  CHECK_THROWS(uniform_bridge(-1, 1, rng));  // negative length
}

TEST_CASE("uniform excursion is uniform over the Catalan family") {
  RngStream rng(555, 3);
  std::map<std::string, int64_t> counts;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    Excursion e = uniform_excursion(4, rng);
    CHECK(is_excursion(e));
    CHECK(e.length() == 7);
    ++counts[to_ud_string(e)];
  }
  CHECK(counts.size() == 5);  // Catalan(3)
  std::vector<double> expected(counts.size(), draws / 5.0);
  std::vector<int64_t> observed;
  for (const auto& [key, c] : counts) observed.push_back(c);
  CHECK(chi_square_pvalue(expected, observed) > 1e-4);
  CHECK_THROWS(uniform_excursion(0, rng));
}

TEST_CASE("text coding round trips") {
  LatticePath p = from_ud_string("UUDUDDD");
  CHECK(p.start == 0);
  CHECK(p.length() == 7);
  CHECK(p.end_value() == -1);
  CHECK(to_ud_string(p) == "UUDUDDD");

  LatticePath shifted;
  shifted.start = 2;
  shifted.steps = {1, -1, -1};
  CHECK(to_ud_string(shifted) == "2:UDD");
  CHECK(from_ud_string("2:UDD") == shifted);
  CHECK(from_ud_string("-3:UU").start == -3);

  CHECK(to_ud_string(LatticePath{}) == "");
  CHECK(from_ud_string("") == LatticePath{});
  CHECK_THROWS(from_ud_string("UXD"));
}
