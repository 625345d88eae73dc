// Height-tilted laws assembled from count tables.
//
// Route notes:
//  * partition_function / height_law walk heights upward, attaching
//    exp(-mu h) factors in the log-domain (exponents built in double-double
//    so mu * h keeps full precision even in the hundreds), and stop once a
//    certified bound on the remaining weighted mass falls below 1e-30 of the
//    accumulated sum: trees not yet counted all have height > h, so they
//    number catalan(n-1) - H(n, h+1) and each weighs at most exp(-mu (h+1)).
//    This keeps the cost proportional to the height window that actually
//    carries mass instead of to n.
//  * root_degree_law has two routes.  The integer route (exact backend,
//    small n) differences r-part forest counts between consecutive height
//    columns.  The scaled route works per height column m with counts
//    flattened geometrically: with lr = log H(nodes, m) / nodes, the scaled
//    values H(j, m) exp(-j lr) stay within a few hundred of 1 in log scale,
//    so the r-fold convolutions run in plain doubles (rescaled whenever a
//    pass drifts past 1e+-100) and the exp(j lr) factor is restored exactly
//    in the final logarithm.  Heights are truncated to a window carrying
//    all but 1e-15 of the height law's mass.
//  * ldp_curve sums height-law tails in the log-domain so tail masses far
//    below double range still produce finite curve values.

#include "treelab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "treelab/dd.hpp"

namespace treelab {

namespace {

// exp(-mu * k) as a LogReal, with the product formed exactly in dd
LogReal exp_neg_mu(double mu, int k) {
  return LogReal::exp_of(dd_neg(dd_mul(dd(mu), static_cast<double>(k))), +1);
}

constexpr double kWindowTailMass = 1e-15;

// largest r for which the integer forest route stays cheap
constexpr int kExactDegreeCap = 64;

// relative mass below which the height walk may stop
const LogReal kTruncEps = LogReal::from_double(1e-30);

// Weighted height masses w(h) = E(n, h) exp(-mu h) for h = 1..n-1, truncated
// once provably negligible; returns the weighted total (the partition
// function up to the truncation error).  When pmf_out is given it receives
// the unnormalized weights, sized n, zeros past the stopping point.
LogReal weighted_height_masses(int n, double mu, const CountTable& table,
                               std::vector<LogReal>* pmf_out) {
  if (pmf_out) pmf_out->assign(static_cast<size_t>(n), LogReal::zero());
  LogReal cat = logreal_from_mpz(catalan(n - 1));
  LogReal acc = LogReal::zero();
  for (int h = 1; h < n; ++h) {
    LogReal cnt = table.E(n, h);
    if (!cnt.is_zero()) {
      LogReal w = cnt * exp_neg_mu(mu, h);
      if (pmf_out) (*pmf_out)[static_cast<size_t>(h)] = w;
      acc = acc + w;
    }
    if (h + 1 < n && !acc.is_zero()) {
      LogReal remaining = cat - table.H(n, h + 1);  // trees of height > h
      if (remaining.sign() <= 0) break;
      if (remaining * exp_neg_mu(mu, h + 1) < acc * kTruncEps) break;
    }
  }
  return acc;
}

}  // namespace

double HeightLaw::p(int h) const {
  if (h < 0 || h >= static_cast<int>(pmf.size())) return 0.0;
  return pmf[static_cast<size_t>(h)].to_double();
}

double HeightLaw::mean() const {
  double s = 0.0;
  for (size_t h = 0; h < pmf.size(); ++h) s += static_cast<double>(h) * pmf[h].to_double();
  return s;
}

double HeightLaw::variance() const {
  double m1 = mean(), s = 0.0;
  for (size_t h = 0; h < pmf.size(); ++h) {
    double d = static_cast<double>(h) - m1;
    s += d * d * pmf[h].to_double();
  }
  return s;
}

double HeightLaw::cdf(int h) const {
  if (h < 0) return 0.0;
  double s = 0.0;
  for (int j = 0; j <= h && j < static_cast<int>(pmf.size()); ++j)
    s += pmf[static_cast<size_t>(j)].to_double();
  return std::min(s, 1.0);
}

std::pair<int, int> HeightLaw::support_window(double tail_mass) const {
  int lo = 0, hi = static_cast<int>(pmf.size()) - 1;
  double mass = 1.0;
  // trim the lighter end while the window keeps mass >= 1 - tail_mass
  while (lo < hi) {
    double pl = pmf[static_cast<size_t>(lo)].to_double();
    double ph = pmf[static_cast<size_t>(hi)].to_double();
    double next = std::min(pl, ph);
    if (mass - next < 1.0 - tail_mass) break;
    mass -= next;
    if (pl <= ph)
      ++lo;
    else
      --hi;
  }
  return {lo, hi};
}

double RootDegreeLaw::p(int r) const {
  if (r < 1 || r > r_max) return 0.0;
  return pmf[static_cast<size_t>(r)].to_double();
}

double RootDegreeLaw::mass() const {
  double s = 0.0;
  for (int r = 1; r <= r_max; ++r) s += pmf[static_cast<size_t>(r)].to_double();
  return s;
}

double RootDegreeLaw::mean() const {
  double s = 0.0;
  for (int r = 1; r <= r_max; ++r) s += r * pmf[static_cast<size_t>(r)].to_double();
  return s;
}

double RootDegreeLaw::variance() const {
  double m1 = mean(), s = 0.0;
  for (int r = 1; r <= r_max; ++r) {
    double d = r - m1;
    s += d * d * pmf[static_cast<size_t>(r)].to_double();
  }
  return s;
}

LogReal partition_function(int n, double mu, const CountTable& table) {
  if (n < 2) throw std::invalid_argument("partition_function: need n >= 2");
  if (mu < 0) throw std::invalid_argument("partition_function: need mu >= 0");
  return weighted_height_masses(n, mu, table, nullptr);
}

LogReal w_sum(int n, double mu, const CountTable& table) {
  if (n < 3) throw std::invalid_argument("w_sum: need n >= 3");
  if (mu < 0) throw std::invalid_argument("w_sum: need mu >= 0");
  const std::vector<LogReal>& hrow = table.row_H_cached(n);
  // 4^{-n} exp(-mu m) with the whole exponent assembled in dd
  dd ln4 = dd_mul(kDdLn2, 2.0);
  LogReal w = LogReal::zero();
  for (int m = 3; m <= n; ++m) {
    const LogReal& cnt = hrow[static_cast<size_t>(m - 1)];
    if (cnt.is_zero()) continue;
    dd e = dd_neg(dd_add(dd_mul(dd(mu), static_cast<double>(m)),
                         dd_mul(ln4, static_cast<double>(n))));
    w = w + cnt * LogReal::exp_of(e, +1);
  }
  return w;
}

HeightLaw height_law(int n, double mu, const CountTable& table) {
  if (n < 2) throw std::invalid_argument("height_law: need n >= 2");
  if (mu < 0) throw std::invalid_argument("height_law: need mu >= 0");
  HeightLaw law;
  law.n = n;
  law.mu = mu;
  law.z = weighted_height_masses(n, mu, table, &law.pmf);
  for (int h = 1; h < n; ++h) {
    if (!law.pmf[static_cast<size_t>(h)].is_zero())
      law.pmf[static_cast<size_t>(h)] = law.pmf[static_cast<size_t>(h)] / law.z;
  }
  return law;
}

namespace {

// Integer route: weight_r = sum_m [F_r(n-1, m) - F_r(n-1, m-1)] exp(-mu m),
// with F differences taken on integers so no cancellation can survive.
std::vector<LogReal> degree_weights_exact(int n, double mu, const CountTable& table,
                                          int r_max) {
  std::vector<LogReal> w(static_cast<size_t>(r_max) + 1, LogReal::zero());
  std::vector<mpz_class> prev(static_cast<size_t>(r_max), 0);  // F_r(n-1, 0) = 0
  for (int m = 1; m <= n - 1; ++m) {
    std::vector<mpz_class> cur =
        forest_count_all(std::min(r_max, n - 1), n - 1, m, table);
    cur.resize(static_cast<size_t>(r_max), 0);
    LogReal decay = exp_neg_mu(mu, m);
    for (int r = 1; r <= r_max; ++r) {
      mpz_class diff = cur[static_cast<size_t>(r - 1)] - prev[static_cast<size_t>(r - 1)];
      if (diff > 0) w[static_cast<size_t>(r)] = w[static_cast<size_t>(r)] + logreal_from_mpz(diff) * decay;
    }
    prev = std::move(cur);
  }
  return w;
}

// One height column of the scaled route: log F_r(n-1) for r = 1..r_max,
// using doubles on rho-flattened counts.  Returns -inf entries where the
// forest count is zero.
std::vector<double> scaled_forest_logs(int nodes, int m, int r_max,
                                       const CountTable& table) {
  const double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> out(static_cast<size_t>(r_max) + 1, kNegInf);
  if (m < 1) return out;
  if (m == 1) {
    // only single-node trees fit below height 1: the all-singleton forest
    if (r_max >= nodes) out[static_cast<size_t>(nodes)] = 0.0;
    return out;
  }
  CountTable::Col col = table.col(m);
  // flatten so the last scaled entry is exactly 1; every other entry then
  // sits within ~pi^2 above and O(log nodes) below that in log scale
  double lr = col.get(nodes).log_mag().hi / nodes;
  std::vector<double> base(static_cast<size_t>(nodes) + 1, 0.0);
  for (int j = 1; j <= nodes; ++j) {
    LogReal hj = col.get(j);
    base[static_cast<size_t>(j)] =
        hj.is_zero() ? 0.0 : std::exp(hj.log_mag().hi - j * lr);
  }
  std::vector<double> f = base;  // r = 1
  double shift = 0.0;            // running log of factored-out rescalings
  auto record = [&](int r) {
    double v = f[static_cast<size_t>(nodes)];
    if (v > 0.0)
      out[static_cast<size_t>(r)] = std::log(v) + shift + nodes * lr;
  };
  record(1);
  for (int r = 2; r <= r_max; ++r) {
    std::vector<double> g(static_cast<size_t>(nodes) + 1, 0.0);
    for (int i = r; i <= nodes; ++i) {
      double acc = 0.0;
      const int j_hi = i - r + 1;
      for (int j = 1; j <= j_hi; ++j) acc += base[static_cast<size_t>(j)] * f[static_cast<size_t>(i - j)];
      g[static_cast<size_t>(i)] = acc;
    }
    f = std::move(g);
    double mx = *std::max_element(f.begin(), f.end());
    if (mx > 1e100 || (mx > 0.0 && mx < 1e-100)) {
      for (double& v : f) v /= mx;
      shift += std::log(mx);
    }
    record(r);
  }
  return out;
}

std::vector<LogReal> degree_weights_scaled(int n, double mu, const CountTable& table,
                                           int r_max, const HeightLaw& law) {
  auto [h_lo, h_hi] = law.support_window(kWindowTailMass);
  int m_lo = std::max(1, h_lo);
  int m_hi = std::min(h_hi, n - 1);
  std::vector<LogReal> w(static_cast<size_t>(r_max) + 1, LogReal::zero());
  std::vector<double> prev = scaled_forest_logs(n - 1, m_lo - 1, r_max, table);
  for (int m = m_lo; m <= m_hi; ++m) {
    std::vector<double> cur = scaled_forest_logs(n - 1, m, r_max, table);
    LogReal decay = exp_neg_mu(mu, m);
    for (int r = 1; r <= r_max; ++r) {
      double la = cur[static_cast<size_t>(r)];
      if (la == -std::numeric_limits<double>::infinity()) continue;
      LogReal a = LogReal::exp_of(dd(la), +1);
      double lb = prev[static_cast<size_t>(r)];
      LogReal diff = (lb == -std::numeric_limits<double>::infinity())
                         ? a
                         : a - LogReal::exp_of(dd(lb), +1);
      // cancellation noise near the window edge can dip negative; clamp
      if (diff.sign() > 0) w[static_cast<size_t>(r)] = w[static_cast<size_t>(r)] + diff * decay;
    }
    prev = std::move(cur);
  }
  return w;
}

}  // namespace

RootDegreeLaw root_degree_law(int n, double mu, const CountTable& table, int r_max) {
  if (n < 2) throw std::invalid_argument("root_degree_law: need n >= 2");
  if (mu < 0) throw std::invalid_argument("root_degree_law: need mu >= 0");
  if (r_max < 1 || r_max > n - 1)
    throw std::invalid_argument("root_degree_law: need 1 <= r_max <= n-1");
  RootDegreeLaw law;
  law.n = n;
  law.mu = mu;
  law.r_max = r_max;
  HeightLaw hl = height_law(n, mu, table);
  law.z = hl.z;
  std::vector<LogReal> w =
      (table.backend() == Backend::exact && n <= kExactDegreeCap)
          ? degree_weights_exact(n, mu, table, r_max)
          : degree_weights_scaled(n, mu, table, r_max, hl);
  law.pmf.assign(static_cast<size_t>(r_max) + 1, LogReal::zero());
  for (int r = 1; r <= r_max; ++r) {
    if (!w[static_cast<size_t>(r)].is_zero())
      law.pmf[static_cast<size_t>(r)] = w[static_cast<size_t>(r)] / law.z;
  }
  return law;
}

std::vector<std::pair<double, double>> ldp_curve(int n, double mu,
                                                 const std::vector<double>& x_grid,
                                                 const CountTable& table) {
  if (mu <= 0) throw std::invalid_argument("ldp_curve: need mu > 0");
  HeightLaw law = height_law(n, mu, table);
  double t_star = std::cbrt(2.0 * M_PI * M_PI * n / mu);
  double scale = std::cbrt(mu * mu * n);
  std::vector<std::pair<double, double>> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) {
    double thr = x * t_star;
    LogReal tail = LogReal::zero();
    if (x >= 1.0) {
      for (int h = std::max(0, static_cast<int>(std::ceil(thr))); h < n; ++h)
        tail = tail + law.pmf[static_cast<size_t>(h)];
    } else {
      int h_hi = std::min(n - 1, static_cast<int>(std::floor(thr)));
      for (int h = 0; h <= h_hi; ++h) tail = tail + law.pmf[static_cast<size_t>(h)];
    }
    double value = tail.is_zero() ? std::numeric_limits<double>::infinity()
                                  : -tail.log_mag().hi / scale;
    out.emplace_back(x, value);
  }
  return out;
}

}  // namespace treelab
