// Closed-form predictions for the mu-tilted height ensemble.
//
// The height law concentrates where t -> mu t + n log(1 + tan^2(pi/t)) is
// minimized; writing x = mu/n and lambda_x(t) = x t + log(1 + tan^2(pi/t)),
// the minimizer t_x controls every asymptotic quantity below: the typical
// height (2 pi^2 n / mu)^{1/3}, the Gaussian width, the discrete two-point
// law near integer t_x, the large-deviation rate, and the partition-function
// prefactors.  Functions here are pure closed forms; nothing touches the
// exact count tables, so experiments can compare the two routes honestly.

#pragma once

#include <string>
#include <vector>

#include "treelab/log_real.hpp"
#include "treelab/plane_tree.hpp"

namespace treelab {

// Parameter regions, split by the tilt strength mu relative to n:
//   brownian               mu sqrt(n) small; tilt too weak to leave the
//                          uniform sqrt(n) height scale
//   intermediate_gaussian  heights concentrate on the n^{1/3} scale with a
//                          Gaussian profile (1 << mu sqrt(n), mu << n^{1/4})
//   intermediate_discrete  lattice effects dominate; height lives on at most
//                          two integers (mu ~ n^{1/4} and beyond)
//   extreme                mu comparable to n; height is O(1)
enum class Regime {
  brownian,
  intermediate_gaussian,
  intermediate_discrete,
  extreme,
};

// Hyphenated tag used in reports: "brownian", "intermediate-gaussian", ...
std::string regime_name(Regime r);

Regime classify_regime(int n, double mu);

// lambda_x(t) = x t + log(1 + tan^2(pi/t)) and its t-derivative, for t > 2.
double lambda(double x, double t);
double lambda_prime(double x, double t);

// Unique minimizer t_x of lambda_x over (2, infinity), for x > 0.
// The returned point satisfies |lambda_prime(x, t)| < 1e-12 * x.
double t_min(double x);

// Small-x expansion of the minimizer and minimum:
//   t_approx  = (2 pi^2 / x)^{1/3} (1 + (1/9)(pi x / 2)^{2/3})
//   min       = 3 (pi x / 2)^{2/3} + (1/6)(pi x / 2)^{4/3}
//   curvature = 3 (pi x / 2)^{2/3}, the quadratic coefficient of lambda_x
//               around its minimum in relative displacement:
//               lambda_x(t) ~ min + curvature * ((t - t_x)/t_x)^2.
// Valid for x in (0, 0.1]; throws outside.
struct LambdaExpansion {
  double t_approx = 0.0;
  double min_approx = 0.0;
  double curvature_coeff = 0.0;
};
LambdaExpansion lambda_expansion(double x);

// Closed-form values of Z(n, mu), one per regime whose applicability window
// contains (n, mu).  Windows (and hence the possible overlaps) are:
//   intermediate_gaussian   mu sqrt(n) > 10 and mu n^{-1/4} <= 5
//   intermediate_discrete   mu n^{-1/4} >= 0.2 and mu/n < 0.1
//   extreme                 mu n^{-1/4} >= 0.2
// In the brownian region no closed form applies and the list is empty.
struct RegimeValue {
  Regime regime;
  LogReal value;
};
std::vector<RegimeValue> partition_asymptotic(int n, double mu);

// Limit law of height - floor(t_x) + 2 in the discrete regime: integer
// support, P(X = k) proportional to exp(-3 (gamma^2 / (4 pi))^{2/3} (k - delta)^2)
// with gamma = mu n^{-1/4} and delta = frac(t_x).  The pmf is truncated where
// terms fall below 1e-30 of the peak; k_range widens the window if positive.
struct DiscreteCltPmf {
  int k_min = 0;
  std::vector<double> pmf;  // pmf[i] = P(X = k_min + i), normalized
  double c_norm = 0.0;      // normalizing sum before division

  double p(int k) const;
};
DiscreteCltPmf discrete_clt_pmf(double gamma, double delta, int k_range = 0);

// Typical-height prediction (2 pi^2 n / mu)^{1/3} and the Gaussian sd
// sqrt((1/3) (2 pi^2 n / mu^4)^{1/3}) around it.
double lln_height(int n, double mu);
double clt_sd(int n, double mu);

// Offset delta_n = mu + n log[(1 + tan^2(pi/ceil(t_x))) / (1 + tan^2(pi/m_x))]
// with m_x = max(floor(t_x), 3); measures how far (n, mu) sits from the
// crossover where the height law splits across two integers.
double delta_n(int n, double mu);
int m_x(int n, double mu);

// Two-point limit: P(height = m_x - 1) -> p with
//   p = A e^{-delta} / (B + A e^{-delta}),
//   A = m_c tan^2(pi/(m_c+1)),  B = (m_c+1) tan^2(pi/m_c),  m_c = m_x at c,
// degenerating to e^{-delta}/(1 + e^{-delta}) as c -> 0.  c = mu/n is the
// tilt-per-node limit; delta = +-infinity maps to p = 0 / 1.
double bernoulli_param(double c, double delta);

// P(star) = 4 / (4 + e^{-delta}) at mu = n log 2 + delta (the m_c = 3
// crossover, where the competition is star against height 2).
double star_probability(double delta);

// Large-deviation rate for height ~ x (2 pi^2 n / mu)^{1/3}:
//   Lambda*(x) = (pi/2)^{2/3} (x-1)^2 (2x+1) / x^2
// (equivalently (2 pi^2)^{1/3} [x + 1/(2 x^2) - 3/2]); +infinity for x <= 0.
double ldp_rate(double x);

// Limit of n P(ball(T, radius) = t0) for a fixed rooted ball t0 observed in
// the weak-tilt regime: 2 K 2^K 4^{-|t0|} with K the number of vertices of
// t0 at maximal depth.  The radius is implied by t0's own height.
double kesten_ball_mass(const PlaneTree& t0);

// All scalar predictions for one (n, mu), with the regime and the quantities
// each downstream experiment compares against.
struct PredictionSet {
  int n = 0;
  double mu = 0.0;
  double x = 0.0;    // mu / n
  double t_x = 0.0;  // minimizer of lambda_x
  Regime regime = Regime::brownian;
  double lln_height = 0.0;  // (2 pi^2 n / mu)^{1/3}
  double clt_sd = 0.0;
  int m_x = 0;
  double delta_n = 0.0;
  double bernoulli_p = 0.0;
  double width_scale = 0.0;  // min(n, (mu n^2)^{1/3})
  bool concentration_applies = false;  // cube-root LLN/CLT quantities valid
};
PredictionSet height_predictions(int n, double mu);

}  // namespace treelab
