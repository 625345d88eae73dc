// Goodness-of-fit machinery for the experiment suite.

#include "treelab/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace treelab {

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  double lpre = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    // lower series; return the complement
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return 1.0 - sum * std::exp(lpre);
  }
  // upper continued fraction, modified Lentz
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(lpre) * h;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double chi_square_pvalue(const std::vector<double>& expected,
                         const std::vector<std::int64_t>& observed,
                         double min_expected) {
  if (expected.size() != observed.size() || expected.empty())
    throw std::invalid_argument("chi_square_pvalue: shape mismatch");
  std::vector<size_t> idx(expected.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](size_t i, size_t j) { return expected[i] < expected[j]; });
  // sweep ascending, closing a bucket whenever it clears the floor; a
  // trailing light bucket merges into the previous one
  std::vector<double> be;
  std::vector<double> bo;
  double ce = 0.0, co = 0.0;
  for (size_t i : idx) {
    ce += expected[i];
    co += static_cast<double>(observed[i]);
    if (ce >= min_expected) {
      be.push_back(ce);
      bo.push_back(co);
      ce = co = 0.0;
    }
  }
  if (ce > 0.0 || co > 0.0) {
    if (be.empty()) {
      be.push_back(ce);
      bo.push_back(co);
    } else {
      be.back() += ce;
      bo.back() += co;
    }
  }
  if (be.size() < 2) return 1.0;
  double chi2 = 0.0;
  for (size_t i = 0; i < be.size(); ++i) {
    double d = bo[i] - be[i];
    chi2 += d * d / be[i];
  }
  return gamma_q(0.5 * static_cast<double>(be.size() - 1), 0.5 * chi2);
}

double ks_distance_vs_normal(const std::vector<double>& z,
                             const std::vector<double>& p) {
  if (z.size() != p.size() || z.empty())
    throw std::invalid_argument("ks_distance_vs_normal: shape mismatch");
  double d = 0.0, f = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    if (i > 0 && !(z[i] > z[i - 1]))
      throw std::invalid_argument("ks_distance_vs_normal: atoms must increase");
    double phi = normal_cdf(z[i]);
    d = std::max(d, std::fabs(f - phi));  // left limit at the atom
    f += p[i];
    d = std::max(d, std::fabs(f - phi));  // value at the atom
  }
  return std::max(d, std::fabs(f - 1.0));  // far right tail
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("tv_distance: shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
  return 0.5 * s;
}

double quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw std::invalid_argument("quantile: empty sample");
  q = std::clamp(q, 0.0, 1.0);
  std::sort(sample.begin(), sample.end());
  double pos = q * static_cast<double>(sample.size() - 1);
  size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= sample.size()) return sample.back();
  double frac = pos - static_cast<double>(lo);
  return sample[lo] * (1.0 - frac) + sample[lo + 1] * frac;
}

}  // namespace treelab
