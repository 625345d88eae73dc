#pragma once
// Plus-or-minus-one walks: bridges (fixed endpoints), excursions (stay
// nonnegative, final step to -1, odd length), the cycle-shift map from
// 0 -> -1 bridges onto excursions, the reflection bijection between
// 0 -> x bridges and constrained 0 -> -1 / 0 -> 0 bridges, and the width
// functional of the piecewise-linear interpolation.

#include "treelab/rng.hpp"

#include <string>
#include <vector>

namespace treelab {

struct LatticePath {
  int start = 0;
  std::vector<signed char> steps;  // each +1 or -1

  int length() const { return static_cast<int>(steps.size()); }

  int end_value() const {
    int v = start;
    for (signed char s : steps) v += s;
    return v;
  }

  std::vector<int> values() const {  // length()+1 entries
    std::vector<int> v;
    v.reserve(steps.size() + 1);
    v.push_back(start);
    int w = start;
    for (signed char s : steps) v.push_back(w += s);
    return v;
  }

  int max_value() const;
  int min_value() const;

  bool operator==(const LatticePath&) const = default;
};

// Validated refinement: start 0, end -1, nonnegative before the last step,
// odd length. Construct through make_excursion or cycle_map.
struct Excursion : LatticePath {};

bool is_excursion(const LatticePath& p);
Excursion make_excursion(LatticePath p);  // throws std::invalid_argument

// Cyclic shift at the first global minimum. Input: 0 -> -1 bridge of odd
// length k; output: the unique excursion among its k cyclic step rotations.
// Exactly k distinct bridges share each image; excursions are fixed points.
Excursion cycle_map(const LatticePath& bridge);

// Reflection across the level floor(x/2) after the last visit to it.
// Maps 0 -> x bridges onto 0 -> -1 (odd length) or 0 -> 0 (even length)
// bridges that visit floor(x/2), and back; applying it twice with the same
// x is the identity. Throws on start/parity violations.
LatticePath cut_bijection(const LatticePath& w, int x);

// Half the maximal number of times the interpolated path meets a horizontal
// level (levels at integers and half-integers both considered). Equals the
// tree width when applied to a contour of a tree with >= 2 nodes. Paths of
// length < 2 give 0 by convention.
double path_width(const LatticePath& p);

// Exactly uniform over bridges 0 -> endpoint of the given length; throws if
// the endpoint is unreachable (parity or range).
LatticePath uniform_bridge(int length, int endpoint, RngStream& rng);

// Uniform over the C_{n-1} excursions of length 2n-1, via uniform bridge
// plus cycle_map (each excursion has exactly 2n-1 preimages).
Excursion uniform_excursion(int n, RngStream& rng);

// "U"/"D" text form; a nonzero start value is prefixed as "start:".
std::string to_ud_string(const LatticePath& p);
LatticePath from_ud_string(const std::string& s);

}  // namespace treelab
