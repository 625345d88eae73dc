// Closed-form predictions: variational minimizer, regime classification,
// partition-function leading terms, limit pmfs, rate function, local limit.
//
// Precision notes: anything multiplied by n (log-partition exponents) is
// assembled in double-double so the final LogReal carries the full exponent
// without losing the O(1) prefactors next to it.  Scalar predictions are
// plain doubles.

#include "treelab/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "treelab/dd.hpp"

namespace treelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// tilt-per-node at which the minimizer reaches 3: x = (2 pi / 9) tan(pi / 3);
// beyond it floor/ceil both clamp to the minimal bound 3
const double kXAtT3 = 2.0 * kPi / 9.0 * std::tan(kPi / 3.0);

// smallest competing integer bound for tilt-per-node x
int m_from_x(double x) {
  if (x >= kXAtT3) return 3;
  return std::max(static_cast<int>(std::floor(t_min(x))), 3);
}

// mu m + n log(1 + tan^2(pi/m)), the full height-m exponent
dd n_lambda(int n, double mu, double m) {
  double tn = std::tan(kPi / m);
  return dd_add(dd_mul(dd(mu), m), dd_mul(dd(std::log1p(tn * tn)), static_cast<double>(n)));
}

// log of 4^n e^mu (e^mu - 1); the last factor via mu + log1p(-e^{-mu}) so
// large mu cannot overflow
dd log_tilt_prefactor(int n, double mu) {
  dd v = dd_mul(kDdLn2, 2.0 * n);
  v = dd_add(v, dd(2.0 * mu));
  return dd_add(v, dd(std::log1p(-std::exp(-mu))));
}

}  // namespace

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::brownian:
      return "brownian";
    case Regime::intermediate_gaussian:
      return "intermediate-gaussian";
    case Regime::intermediate_discrete:
      return "intermediate-discrete";
    case Regime::extreme:
      return "extreme";
  }
  throw std::logic_error("regime_name: bad enum value");
}

Regime classify_regime(int n, double mu) {
  if (n < 1 || mu < 0)
    throw std::invalid_argument("classify_regime: need n >= 1, mu >= 0");
  if (mu * std::sqrt(static_cast<double>(n)) <= 10.0) return Regime::brownian;
  if (mu / n >= 0.1) return Regime::extreme;
  if (mu * std::pow(static_cast<double>(n), -0.25) >= 0.2)
    return Regime::intermediate_discrete;
  return Regime::intermediate_gaussian;
}

double lambda(double x, double t) {
  if (t <= 2.0) throw std::invalid_argument("lambda: need t > 2");
  double tn = std::tan(kPi / t);
  return x * t + std::log1p(tn * tn);
}

double lambda_prime(double x, double t) {
  if (t <= 2.0) throw std::invalid_argument("lambda_prime: need t > 2");
  return x - (2.0 * kPi / (t * t)) * std::tan(kPi / t);
}

double t_min(double x) {
  if (!(x > 0)) throw std::invalid_argument("t_min: need x > 0");
  double lo = 2.0 + 1e-9;
  if (lambda_prime(x, lo) >= 0.0) return lo;  // x beyond ~2e9; clamp
  double hi = std::max(8.0, 2.0 * std::cbrt(2.0 * kPi * kPi / x));
  while (lambda_prime(x, hi) <= 0.0) hi *= 2.0;
  // lambda_prime is increasing through its unique zero; plain bisection
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (lambda_prime(x, mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LambdaExpansion lambda_expansion(double x) {
  if (!(x > 0) || x > 0.1)
    throw std::invalid_argument("lambda_expansion: need x in (0, 0.1]");
  LambdaExpansion e;
  double c = std::pow(kPi * x / 2.0, 2.0 / 3.0);
  e.t_approx = std::cbrt(2.0 * kPi * kPi / x) * (1.0 + c / 9.0);
  // second-order term: the quartic piece of -2 log cos(pi/t) evaluated at the
  // leading minimizer; leaves an O(x^2) remainder (measured constant ~0.018)
  e.min_approx = 3.0 * c + c * c / 6.0;
  e.curvature_coeff = 3.0 * c;
  return e;
}

std::vector<RegimeValue> partition_asymptotic(int n, double mu) {
  if (n < 3 || !(mu > 0))
    throw std::invalid_argument("partition_asymptotic: need n >= 3, mu > 0");
  std::vector<RegimeValue> out;
  double x = mu / n;
  double g = mu * std::pow(static_cast<double>(n), -0.25);
  if (mu * std::sqrt(static_cast<double>(n)) >= 10.0 && g <= 5.0) {
    // Gaussian window: the height sum is a Laplace integral around t_x
    double pref = std::pow(kPi, 5.0 / 6.0) / (std::cbrt(2.0) * std::sqrt(3.0));
    dd lg = log_tilt_prefactor(n, mu);
    lg = dd_add(lg, dd(std::log(pref * std::cbrt(mu)) -
                       (5.0 / 6.0) * std::log(static_cast<double>(n))));
    lg = dd_sub(lg, dd(3.0 * std::cbrt(kPi * kPi * mu * mu * n / 4.0)));
    out.push_back({Regime::intermediate_gaussian, LogReal::exp_of(lg, +1)});
  }
  if (g >= 0.2 && x < 0.1) {
    // lattice window: Gaussian factor sampled on integers around t_x
    double t = t_min(x);
    double coef = 1.5 * std::cbrt(mu * mu * mu * mu / (2.0 * kPi * kPi * n));
    int m0 = static_cast<int>(std::llround(t));
    int w = 1 + static_cast<int>(std::ceil(std::sqrt(70.0 / coef)));
    double theta = 0.0;
    for (int m = m0 - w; m <= m0 + w; ++m)
      theta += std::exp(-coef * (m - t) * (m - t));
    dd lg = log_tilt_prefactor(n, mu);
    lg = dd_add(lg, dd(std::log(mu / (2.0 * n)) + std::log(theta)));
    lg = dd_sub(lg, n_lambda(n, mu, t));
    out.push_back({Regime::intermediate_discrete, LogReal::exp_of(lg, +1)});
  }
  if (g >= 0.2) {
    // height-by-height window: only the integers straddling t_x survive
    double t = (x >= kXAtT3) ? 3.0 : t_min(x);
    int m_lo = std::max(static_cast<int>(std::floor(t)), 3);
    int m_hi = std::max(static_cast<int>(std::ceil(t)), 3);
    LogReal sum = LogReal::zero();
    for (int m = m_lo; m <= m_hi; ++m) {
      double tn = std::tan(kPi / m);
      dd e = dd_sub(dd(std::log(tn * tn / m)), n_lambda(n, mu, m));
      sum = sum + LogReal::exp_of(e, +1);
    }
    dd lg = dd_add(dd_mul(kDdLn2, 2.0 * n), dd(2.0 * mu));
    out.push_back({Regime::extreme, LogReal::exp_of(lg, +1) * sum});
  }
  return out;
}

double DiscreteCltPmf::p(int k) const {
  int i = k - k_min;
  if (i < 0 || i >= static_cast<int>(pmf.size())) return 0.0;
  return pmf[static_cast<size_t>(i)];
}

DiscreteCltPmf discrete_clt_pmf(double gamma, double delta, int k_range) {
  if (!(gamma > 0)) throw std::invalid_argument("discrete_clt_pmf: need gamma > 0");
  double coef = 3.0 * std::pow(gamma * gamma / (4.0 * kPi), 2.0 / 3.0);
  // window wide enough that dropped terms are < 1e-30 of the peak
  int w = 1 + static_cast<int>(std::ceil(std::sqrt(70.0 / coef)));
  if (k_range > w) w = k_range;
  int k0 = static_cast<int>(std::llround(delta));
  DiscreteCltPmf out;
  out.k_min = k0 - w;
  out.pmf.resize(static_cast<size_t>(2 * w) + 1);
  for (int i = 0; i < static_cast<int>(out.pmf.size()); ++i) {
    double d = (out.k_min + i) - delta;
    out.pmf[static_cast<size_t>(i)] = std::exp(-coef * d * d);
    out.c_norm += out.pmf[static_cast<size_t>(i)];
  }
  for (double& p : out.pmf) p /= out.c_norm;
  return out;
}

double lln_height(int n, double mu) {
  if (n < 1 || !(mu > 0)) throw std::invalid_argument("lln_height: need n >= 1, mu > 0");
  return std::cbrt(2.0 * kPi * kPi * n / mu);
}

double clt_sd(int n, double mu) {
  if (n < 1 || !(mu > 0)) throw std::invalid_argument("clt_sd: need n >= 1, mu > 0");
  return std::sqrt(std::cbrt(2.0 * kPi * kPi * n / (mu * mu * mu * mu)) / 3.0);
}

int m_x(int n, double mu) {
  if (n < 1 || !(mu > 0)) throw std::invalid_argument("m_x: need n >= 1, mu > 0");
  return m_from_x(mu / n);
}

double delta_n(int n, double mu) {
  if (n < 1 || !(mu > 0)) throw std::invalid_argument("delta_n: need n >= 1, mu > 0");
  double x = mu / n;
  if (x >= kXAtT3) return mu;  // both competing bounds collapse to 3
  double t = t_min(x);
  int mc = std::max(static_cast<int>(std::floor(t)), 3);
  int ce = std::max(static_cast<int>(std::ceil(t)), 3);
  auto lg = [](int m) {
    double tn = std::tan(kPi / m);
    return std::log1p(tn * tn);
  };
  return mu + n * (lg(ce) - lg(mc));
}

double bernoulli_param(double c, double delta) {
  if (c < 0) throw std::invalid_argument("bernoulli_param: need c >= 0");
  double u = std::exp(-delta);
  if (std::isinf(u)) return 1.0;
  if (c == 0.0) return u / (1.0 + u);
  int mc = m_from_x(c);
  double ta = std::tan(kPi / (mc + 1));
  double tb = std::tan(kPi / mc);
  double a = mc * ta * ta;
  double b = (mc + 1) * tb * tb;
  return a * u / (b + a * u);
}

double star_probability(double delta) { return 4.0 / (4.0 + std::exp(-delta)); }

double ldp_rate(double x) {
  if (x <= 0.0) return std::numeric_limits<double>::infinity();
  double a = std::pow(kPi / 2.0, 2.0 / 3.0) * (x - 1.0) * (x - 1.0) * (2.0 * x + 1.0) / (x * x);
  double b = std::cbrt(2.0 * kPi * kPi) * (x + 0.5 / (x * x) - 1.5);
  if (std::fabs(a - b) > 1e-12 * std::max(1.0, std::fabs(a)))
    throw std::logic_error("ldp_rate: algebraic forms disagree");
  return a;  // the factored form; no cancellation near x = 1
}

double kesten_ball_mass(const PlaneTree& t0) {
  TreeStats st = stats(t0);
  int k = st.generation_sizes[static_cast<size_t>(st.height)];
  int sz = t0.size();
  // 2 K 2^K 4^{-size} as one exact ldexp
  return std::ldexp(static_cast<double>(k), k + 1 - 2 * sz);
}

PredictionSet height_predictions(int n, double mu) {
  if (n < 2 || !(mu > 0))
    throw std::invalid_argument("height_predictions: need n >= 2, mu > 0");
  PredictionSet ps;
  ps.n = n;
  ps.mu = mu;
  ps.x = mu / n;
  ps.t_x = t_min(ps.x);
  ps.regime = classify_regime(n, mu);
  ps.lln_height = lln_height(n, mu);
  ps.clt_sd = clt_sd(n, mu);
  ps.m_x = m_from_x(ps.x);
  ps.delta_n = delta_n(n, mu);
  ps.bernoulli_p = bernoulli_param(ps.x, ps.delta_n);
  ps.width_scale = std::min(static_cast<double>(n),
                            std::cbrt(mu * n * static_cast<double>(n)));
  ps.concentration_applies = ps.regime == Regime::intermediate_gaussian ||
                             ps.regime == Regime::intermediate_discrete;
  return ps;
}

}  // namespace treelab
