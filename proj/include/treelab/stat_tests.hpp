// Small statistics kit for comparing sampled frequencies against exact laws.
//
// Only what the experiments need: a pooled chi-square goodness-of-fit
// p-value, Kolmogorov and total-variation distances, the regularized
// incomplete gamma that backs the chi-square tail, and quantiles.

#pragma once

#include <cstdint>
#include <vector>

namespace treelab {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
// a > 0, x >= 0.  Series for x < a + 1, Lentz continued fraction otherwise;
// absolute error ~1e-14 over the chi-square range used here.
double gamma_q(double a, double x);

// Standard normal CDF.
double normal_cdf(double z);

// Chi-square goodness-of-fit p-value.  Cells with expected count below
// min_expected are pooled (smallest expectations merged into one bucket)
// before forming the statistic; degrees of freedom = cells_after - 1.
// Returns the upper-tail p-value, or 1.0 if pooling leaves a single cell.
double chi_square_pvalue(const std::vector<double>& expected,
                         const std::vector<std::int64_t>& observed,
                         double min_expected = 5.0);

// Kolmogorov distance sup_z |F(z) - Phi(z)| between a discrete law with
// atoms z[i] (strictly increasing) of mass p[i] and the standard normal.
double ks_distance_vs_normal(const std::vector<double>& z,
                             const std::vector<double>& p);

// Total variation distance (1/2) sum_i |p[i] - q[i]| over a shared index
// range; vectors must have equal length.
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

// Quantile of an unsorted sample (copies and sorts; linear interpolation
// between order statistics).  q in [0, 1].
double quantile(std::vector<double> sample, double q);

}  // namespace treelab
