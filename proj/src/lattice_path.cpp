#include "treelab/lattice_path.hpp"

#include <algorithm>
#include <stdexcept>

namespace treelab {

int LatticePath::max_value() const {
  int v = start, m = start;
  for (signed char s : steps) m = std::max(m, v += s);
  return m;
}

int LatticePath::min_value() const {
  int v = start, m = start;
  for (signed char s : steps) m = std::min(m, v += s);
  return m;
}

bool is_excursion(const LatticePath& p) {
  if (p.start != 0 || p.length() % 2 == 0) return false;
  int v = 0;
  for (int t = 0; t + 1 < p.length(); ++t) {
    v += p.steps[t];
    if (v < 0) return false;
  }
  v += p.steps.back();
  return v == -1;
}

Excursion make_excursion(LatticePath p) {
  if (!is_excursion(p)) throw std::invalid_argument("path is not an excursion");
  Excursion e;
  e.start = 0;
  e.steps = std::move(p.steps);
  return e;
}

Excursion cycle_map(const LatticePath& bridge) {
  if (bridge.start != 0 || bridge.length() % 2 == 0 || bridge.end_value() != -1)
    throw std::invalid_argument("cycle_map needs a 0 -> -1 bridge of odd length");
  const int k = bridge.length();
  // first time the walk attains its global minimum
  int v = 0, minv = 0, tau = 0;
  for (int t = 0; t < k; ++t) {
    v += bridge.steps[t];
    if (v < minv) {
      minv = v;
      tau = t + 1;
    }
  }
  Excursion e;
  e.start = 0;
  e.steps.reserve(k);
  for (int t = 0; t < k; ++t) e.steps.push_back(bridge.steps[(tau + t) % k]);
  return e;
}

LatticePath cut_bijection(const LatticePath& w, int x) {
  if (w.start != 0) throw std::invalid_argument("cut_bijection needs start 0");
  if (((w.length() ^ x) & 1) != 0)
    throw std::invalid_argument("cut_bijection: length and x differ in parity");
  const int level = x >= 0 ? x / 2 : (x - 1) / 2;  // floor(x/2)
  // last visit to the reflection level; reflect all steps after it
  int v = 0, tau = (0 == level) ? 0 : -1;
  for (int t = 0; t < w.length(); ++t) {
    v += w.steps[t];
    if (v == level) tau = t + 1;
  }
  if (tau < 0) throw std::invalid_argument("cut_bijection: path never visits floor(x/2)");
  LatticePath out = w;
  for (int t = tau; t < w.length(); ++t) out.steps[t] = -out.steps[t];
  return out;
}

double path_width(const LatticePath& p) {
  if (p.length() < 2) return 0.0;
  std::vector<int> vals = p.values();
  int lo = *std::min_element(vals.begin(), vals.end());
  int hi = *std::max_element(vals.begin(), vals.end());
  // occupancy of integer levels and of the gaps between them
  std::vector<int> at(hi - lo + 1, 0), cross(hi - lo, 0);
  for (int val : vals) ++at[val - lo];
  for (size_t t = 0; t + 1 < vals.size(); ++t) ++cross[std::min(vals[t], vals[t + 1]) - lo];
  int best = 0;
  for (int c : at) best = std::max(best, c);
  for (int c : cross) best = std::max(best, c);
  return best / 2.0;
}

LatticePath uniform_bridge(int length, int endpoint, RngStream& rng) {
  int ups2 = length + endpoint;
  if (length < 0 || ups2 % 2 != 0 || ups2 < 0 || ups2 > 2 * length)
    throw std::invalid_argument("uniform_bridge: endpoint unreachable");
  int ups = ups2 / 2;
  LatticePath p;
  p.start = 0;
  p.steps.assign(length, -1);
  std::fill(p.steps.begin(), p.steps.begin() + ups, +1);
  for (int i = length - 1; i > 0; --i)  // Fisher-Yates on the step multiset
    std::swap(p.steps[i], p.steps[rng.below(i + 1)]);
  return p;
}

Excursion uniform_excursion(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("uniform_excursion: n must be positive");
  return cycle_map(uniform_bridge(2 * n - 1, -1, rng));
}

std::string to_ud_string(const LatticePath& p) {
  std::string s;
  if (p.start != 0) s = std::to_string(p.start) + ":";
  for (signed char st : p.steps) s += st > 0 ? 'U' : 'D';
  return s;
}

LatticePath from_ud_string(const std::string& s) {
  LatticePath p;
  size_t colon = s.find(':');
  size_t begin = 0;
  if (colon != std::string::npos) {
    p.start = std::stoi(s.substr(0, colon));
    begin = colon + 1;
  }
  for (size_t i = begin; i < s.size(); ++i) {
    if (s[i] == 'U')
      p.steps.push_back(+1);
    else if (s[i] == 'D')
      p.steps.push_back(-1);
    else
      throw std::invalid_argument("path string: expected only U and D steps");
  }
  return p;
}

}  // namespace treelab
