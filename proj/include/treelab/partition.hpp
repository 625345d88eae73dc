// Height-tilted tree laws derived from a count table.
//
// A plane tree T on n nodes gets weight exp(-mu * height(T)); the partition
// function Z(n, mu) sums that weight over all trees, and the height /
// root-degree laws are the corresponding marginals.  Everything here is
// computed from H / E counts supplied by a CountTable, converted to the
// log-domain only at the last step, so exact-backend laws inherit integer
// accuracy (relative error ~1e-30 from LogReal arithmetic alone).
//
// Conventions:
//   height law    p_h for h in [0, n-1]; p_h = E(n, h) exp(-mu h) / Z.
//   root degree   q_r for r in [1, n-1]; q_{n-1} = exp(-mu) / Z (the star).
//   w_sum         W(n, mu) = 4^{-n} sum_{m=3..n} H(n, m-1) exp(-mu m),
//                 the rescaled tail that drives Z once mu >> 1/sqrt(n).

#pragma once

#include <utility>
#include <vector>

#include "treelab/counting.hpp"
#include "treelab/log_real.hpp"

namespace treelab {

// Exact height distribution of the mu-tilted tree on n nodes.
struct HeightLaw {
  int n = 0;
  double mu = 0.0;
  std::vector<LogReal> pmf;  // index h = 0..n-1
  LogReal z;                 // normalization Z(n, mu)

  double p(int h) const;  // pmf value as a double
  double mean() const;
  double variance() const;
  double cdf(int h) const;  // P(height <= h)
  // Smallest window [lo, hi] whose mass is >= 1 - tail_mass.
  std::pair<int, int> support_window(double tail_mass) const;
};

// Exact root-degree distribution of the mu-tilted tree, computed for
// r = 1..r_max.  Entries are absolute probabilities (normalized by the full
// Z), so the stored mass is < 1 whenever r_max < n-1.
struct RootDegreeLaw {
  int n = 0;
  double mu = 0.0;
  int r_max = 0;
  std::vector<LogReal> pmf;  // index r = 0..r_max, pmf[0] = 0
  LogReal z;

  double p(int r) const;
  double mass() const;  // sum of stored pmf entries
  double mean() const;  // moments of the stored range
  double variance() const;
};

// Z(n, mu) = sum over n-node plane trees of exp(-mu * height).
// Requires n >= 2.  mu = 0 recovers the Catalan number C_{n-1}.
LogReal partition_function(int n, double mu, const CountTable& table);

// W(n, mu) = 4^{-n} sum_{m=3..n} H(n, m-1) exp(-mu m).  Requires n >= 3.
LogReal w_sum(int n, double mu, const CountTable& table);

// Exact laws.  Both require n >= 2 and a table covering row n (height_law)
// or rows 1..n-1 plus columns up to the retained height window
// (root_degree_law).  root_degree_law throws if r_max is out of [1, n-1].
HeightLaw height_law(int n, double mu, const CountTable& table);
RootDegreeLaw root_degree_law(int n, double mu, const CountTable& table,
                              int r_max);

// Normalized upper/lower-tail log-probabilities of the height on the cube-root
// scale: for each grid point x the value is
//   -(mu^2 n)^{-1/3} log P(height >= x t*)   for x >= 1,
//   -(mu^2 n)^{-1/3} log P(height <= x t*)   for x < 1,
// with t* = (2 pi^2 n / mu)^{1/3}.  An empty tail yields +infinity.
std::vector<std::pair<double, double>> ldp_curve(int n, double mu,
                                                 const std::vector<double>& x_grid,
                                                 const CountTable& table);

}  // namespace treelab
