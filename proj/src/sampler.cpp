// Descent samplers over first-subtree splits.
//
// A tree on rem nodes decomposes as (first subtree of j nodes, remainder on
// rem - j nodes hanging off the same root).  Conditioned laws factor across
// that split, so sampling walks down the count table: pick j (and, for the
// height-exact law, whether the first subtree is the one carrying the exact
// height), recurse on the first subtree, iterate on the remainder.  Split
// masses concentrate at the two ends of the j range, so candidates are
// scanned in the zigzag order 1, rem-1, 2, rem-2, ... with a running
// cumulative-weight early exit.
//
// Randomness: integer-weighted picks draw a uniform GMP integer below the
// total weight (bit-length rejection, exact); real-weighted picks compare a
// 106-bit uniform against a compensated linear-domain cumulative sum of the
// weights, each rescaled by the pick total before exponentiation, so one
// decision costs one exp and carries relative error ~1e-16 (budget 1e-15).
// On the log-approximate backend weights themselves carry ~1e-9 relative
// error, so a sampled law sits within total variation ~n * 1e-9 of the
// target; counts on the exact backend make the descent itself exact.

#include "treelab/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "treelab/dd.hpp"

namespace treelab {

namespace {

// zigzag enumeration of [1, k]: 1, k, 2, k-1, ...
inline int zigzag(int k, int step) {
  return (step % 2 == 0) ? 1 + step / 2 : k - step / 2;
}

// uniform in [0, 1) with 106 random mantissa bits
dd uniform_dd(RngStream& rng) {
  double a = static_cast<double>(rng.next_u64() >> 11) * 0x1p-53;
  double b = static_cast<double>(rng.next_u64() >> 11) * 0x1p-106;
  return dd_add(dd(a), dd(b));
}

// Running sum of weights given in log form, accumulated in the linear
// domain after shifting by the log of the pick total: each step is one exp
// on a small dd difference plus a compensated double addition, so the
// per-decision relative error stays near 1e-16.  The matching target for a
// uniform u is plain u, since the total itself maps to 1.
struct ShiftedCum {
  dd shift;
  double sum = 0.0;
  double carry = 0.0;

  explicit ShiftedCum(dd total_log) : shift(total_log) {}

  // adds exp(lg - shift), returns the running sum
  double add(dd lg) {
    dd d = dd_sub(lg, shift);
    double w = std::exp(d.hi) * (1.0 + d.lo);
    double y = w - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    return sum;
  }
};

// root plus the given subtrees, re-indexed to preorder
PlaneTree graft(const std::vector<PlaneTree>& sub) {
  PlaneTree t;
  t.children.emplace_back();
  int base = 1;
  for (const PlaneTree& s : sub) {
    t.children[0].push_back(base);
    for (const std::vector<int>& kids : s.children) {
      std::vector<int> shifted;
      shifted.reserve(kids.size());
      for (int c : kids) shifted.push_back(base + c);
      t.children.push_back(std::move(shifted));
    }
    base += s.size();
  }
  return t;
}

// inverse of graft: each root subtree occupies a contiguous preorder block
std::vector<PlaneTree> split_root_subtrees(const PlaneTree& t) {
  std::vector<PlaneTree> out;
  const std::vector<int>& rc = t.children[0];
  out.reserve(rc.size());
  for (size_t i = 0; i < rc.size(); ++i) {
    int lo = rc[i];
    int hi = (i + 1 < rc.size()) ? rc[i + 1] : t.size();
    PlaneTree s;
    s.children.reserve(static_cast<size_t>(hi - lo));
    for (int v = lo; v < hi; ++v) {
      std::vector<int> kids;
      kids.reserve(t.children[static_cast<size_t>(v)].size());
      for (int c : t.children[static_cast<size_t>(v)]) kids.push_back(c - lo);
      s.children.push_back(std::move(kids));
    }
    out.push_back(std::move(s));
  }
  return out;
}

int pick_bounded_split_exact(int rem, int m, const CountTable& table, RngStream& rng) {
  mpz_class z = mpz_uniform_below(table.H_int(rem, m), rng);
  for (int s = 0; s < rem - 1; ++s) {
    int j = zigzag(rem - 1, s);
    mpz_class f = table.H_int(j, m - 1);
    if (f == 0) continue;
    mpz_class w = f * table.H_int(rem - j, m);
    if (z < w) return j;
    z -= w;
  }
  throw std::logic_error("sample_uniform_bounded: split weights inconsistent");
}

int pick_bounded_split_log(int rem, int m, const CountTable& table, RngStream& rng) {
  CountTable::Col below = table.col(std::min(m - 1, rem - 1));
  CountTable::Col at = table.col(std::min(m, rem));
  double target = uniform_dd(rng).to_double();
  ShiftedCum cum(at.get(rem).log_mag());
  int last = 0;
  for (int s = 0; s < rem - 1; ++s) {
    int j = zigzag(rem - 1, s);
    LogReal f = below.get(j);
    if (f.is_zero()) continue;
    LogReal g = at.get(rem - j);
    if (g.is_zero()) continue;
    last = j;
    if (target < cum.add(dd_add(f.log_mag(), g.log_mag()))) return j;
  }
  if (last > 0) return last;  // terminal rounding sliver
  throw std::logic_error("sample_uniform_bounded: split weights inconsistent");
}

// (carrier?, j): carrier means the first subtree has height exactly hh-1
// and the remainder only stays below hh+1; otherwise the first subtree is
// bounded and the remainder still owes the exact height
std::pair<bool, int> pick_height_split_exact(int rem, int hh, const CountTable& table,
                                             RngStream& rng) {
  mpz_class z = mpz_uniform_below(table.E_int(rem, hh), rng);
  for (int s = 0; s < rem - 1; ++s) {
    int j = zigzag(rem - 1, s);
    mpz_class f = table.H_int(j, hh - 1);
    if (f != 0) {
      mpz_class w = f * table.E_int(rem - j, hh);
      if (z < w) return {false, j};
      z -= w;
    }
    f = table.E_int(j, hh - 1);
    if (f != 0) {
      mpz_class w = f * table.H_int(rem - j, hh + 1);
      if (z < w) return {true, j};
      z -= w;
    }
  }
  throw std::logic_error("sample_uniform_exact_height: split weights inconsistent");
}

std::pair<bool, int> pick_height_split_log(int rem, int hh, const CountTable& table,
                                           RngStream& rng) {
  CountTable::Col below = table.col(hh - 1);  // H and E one level down
  CountTable::Col at = table.col(hh);         // E at the owed height
  CountTable::Col above = table.col(std::min(hh + 1, rem));
  double target = uniform_dd(rng).to_double();
  ShiftedCum cum(at.get_E(rem).log_mag());
  std::pair<bool, int> last{false, 0};
  for (int s = 0; s < rem - 1; ++s) {
    int j = zigzag(rem - 1, s);
    LogReal f = below.get(j);
    if (!f.is_zero()) {
      LogReal g = at.get_E(rem - j);
      if (!g.is_zero()) {
        last = {false, j};
        if (target < cum.add(dd_add(f.log_mag(), g.log_mag()))) return last;
      }
    }
    f = below.get_E(j);
    if (!f.is_zero()) {
      LogReal g = above.get(rem - j);
      if (!g.is_zero()) {
        last = {true, j};
        if (target < cum.add(dd_add(f.log_mag(), g.log_mag()))) return last;
      }
    }
  }
  if (last.second > 0) return last;
  throw std::logic_error("sample_uniform_exact_height: split weights inconsistent");
}

}  // namespace

mpz_class mpz_uniform_below(const mpz_class& bound, RngStream& rng) {
  if (bound <= 0) throw std::invalid_argument("mpz_uniform_below: need bound >= 1");
  if (bound == 1) return 0;
  size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  size_t words = (bits + 63) / 64;
  unsigned top_shift = static_cast<unsigned>(words * 64 - bits);
  while (true) {
    mpz_class z = 0;
    for (size_t i = 0; i < words; ++i) {
      std::uint64_t w = rng.next_u64();
      if (i == 0) w >>= top_shift;
      mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), 64);
      mpz_add_ui(z.get_mpz_t(), z.get_mpz_t(), w);
    }
    if (z < bound) return z;  // acceptance probability > 1/2 per round
  }
}

PlaneTree sample_uniform_tree(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_uniform_tree: need n >= 1");
  if (n == 1) return single_node();
  return from_contour(uniform_excursion(n, rng));
}

PlaneTree sample_uniform_bounded(int n, int m, const CountTable& table, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_uniform_bounded: need n >= 1");
  if (m > n) m = n;  // the constraint saturates; keeps columns in range
  if (n == 1) {
    if (m < 1)
      throw std::invalid_argument("sample_uniform_bounded: no trees below that height");
    return single_node();
  }
  if (m < 2)
    throw std::invalid_argument("sample_uniform_bounded: no trees below that height");
  std::vector<PlaneTree> sub;
  int rem = n;
  while (rem > 1) {
    int j = table.backend() == Backend::exact
                ? pick_bounded_split_exact(rem, m, table, rng)
                : pick_bounded_split_log(rem, m, table, rng);
    sub.push_back(sample_uniform_bounded(j, m - 1, table, rng));
    rem -= j;
  }
  return graft(sub);
}

PlaneTree sample_uniform_exact_height(int n, int h, const CountTable& table,
                                      RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_uniform_exact_height: need n >= 1");
  if (n == 1) {
    if (h != 0)
      throw std::invalid_argument("sample_uniform_exact_height: no trees of that height");
    return single_node();
  }
  if (h < 1 || h > n - 1)
    throw std::invalid_argument("sample_uniform_exact_height: no trees of that height");
  std::vector<PlaneTree> sub;
  int rem = n;
  const int hh = h;  // the owed height never changes along the remainder walk
  for (;;) {
    auto [carrier, j] = table.backend() == Backend::exact
                            ? pick_height_split_exact(rem, hh, table, rng)
                            : pick_height_split_log(rem, hh, table, rng);
    if (carrier) {
      sub.push_back(sample_uniform_exact_height(j, hh - 1, table, rng));
      PlaneTree rest = sample_uniform_bounded(rem - j, hh + 1, table, rng);
      for (PlaneTree& s : split_root_subtrees(rest)) sub.push_back(std::move(s));
      break;
    }
    sub.push_back(sample_uniform_bounded(j, hh - 1, table, rng));
    rem -= j;
  }
  PlaneTree t = graft(sub);
  if (stats(t).height != h)
    throw std::logic_error("sample_uniform_exact_height: height assertion failed");
  return t;
}

int sample_height(const HeightLaw& law, RngStream& rng) {
  double target = uniform_dd(rng).to_double();
  ShiftedCum cum(dd(0.0));  // pmf entries are already normalized
  int last = -1;
  for (int h = 0; h < static_cast<int>(law.pmf.size()); ++h) {
    const LogReal& p = law.pmf[static_cast<size_t>(h)];
    if (p.is_zero()) continue;
    last = h;
    if (target < cum.add(p.log_mag())) return h;
  }
  if (last >= 0) return last;
  throw std::logic_error("sample_height: empty law");
}

PlaneTree sample_biased_tree(int n, double mu, const CountTable& table, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_biased_tree: need n >= 1");
  if (mu < 0) throw std::invalid_argument("sample_biased_tree: need mu >= 0");
  if (n == 1) return single_node();
  HeightLaw law = height_law(n, mu, table);
  int h = sample_height(law, rng);
  return sample_uniform_exact_height(n, h, table, rng);
}

}  // namespace treelab
