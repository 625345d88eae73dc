// Closed-form evaluation of the height-bounded tree counts H(n, m).
//
// For n >= 2 and any m >= 2,
//   H(n, m) = 4^n/(m+1) * sum_{k=1}^{floor(m/2)} sin^2(t_k) cos^{2n-2}(t_k),
//   t_k = pi k / (m+1),
// and the value saturates at C_{n-1} for m >= n, so m is capped at n before
// evaluating (same integer, fewer terms). n = 1 is handled separately: the
// truncated sum misses the zero-cosine term that only matters when the
// exponent 2n-2 vanishes.

#include "treelab/counting.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>

namespace treelab {

mpz_class catalan(int n) {
  if (n < 0) throw std::invalid_argument("catalan: negative index");
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), 2ul * static_cast<unsigned long>(n),
               static_cast<unsigned long>(n));
  return b / (n + 1);
}

namespace {

void check_count_args(int n, int m) {
  if (n < 1) throw std::invalid_argument("count: need n >= 1");
  if (m < 0) throw std::invalid_argument("count: need m >= 0");
}

double log10_of_mpz(const mpz_class& z) {
  signed long exp2 = 0;
  double d = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log10(std::fabs(d)) + static_cast<double>(exp2) * 0.30102999566398119521;
}

}  // namespace

TrigCount trig_count(int n, int m, int precision_bits) {
  check_count_args(n, m);
  if (precision_bits < 64) precision_bits = 64;

  TrigCount out;
  if (m == 0 || (m == 1 && n >= 2)) {
    out.rounded = 0;
    out.certified = true;
    out.log10_value = -HUGE_VAL;
    return out;
  }
  if (n == 1) {
    out.rounded = 1;
    out.certified = true;
    out.log10_value = 0.0;
    return out;
  }
  if (m > n) m = n;  // count saturates at C_{n-1}

  const mpfr_prec_t p = precision_bits;
  mpfr_t pi, t, s, c, term, acc, r, d;
  mpfr_inits2(p, pi, t, s, c, term, acc, r, d, static_cast<mpfr_ptr>(nullptr));
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_set_zero(acc, 1);

  const int K = m / 2;
  for (int k = 1; k <= K; ++k) {
    mpfr_mul_ui(t, pi, static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_div_ui(t, t, static_cast<unsigned long>(m + 1), MPFR_RNDN);
    mpfr_sin_cos(s, c, t, MPFR_RNDN);
    mpfr_sqr(term, s, MPFR_RNDN);
    mpfr_pow_ui(c, c, static_cast<unsigned long>(2 * n - 2), MPFR_RNDN);
    mpfr_mul(term, term, c, MPFR_RNDN);
    mpfr_add(acc, acc, term, MPFR_RNDN);
  }
  mpfr_mul_2ui(acc, acc, static_cast<unsigned long>(2 * n), MPFR_RNDN);
  mpfr_div_ui(acc, acc, static_cast<unsigned long>(m + 1), MPFR_RNDN);

  // every term goes through a bounded number of correctly rounded operations
  // and all terms are positive, so the relative error of the sum stays below
  // roughly (K + ops) * 2^(1-p); keep a generous margin
  double rel_err = std::ldexp(static_cast<double>(K) + 32.0, 2 - static_cast<int>(p));
  double abs_err = mpfr_get_d(acc, MPFR_RNDU) * rel_err;

  mpfr_round(r, acc);
  mpfr_sub(d, acc, r, MPFR_RNDN);
  mpfr_abs(d, d, MPFR_RNDN);
  double gap = mpfr_get_d(d, MPFR_RNDU);

  out.certified = std::isfinite(abs_err) && abs_err < 0.25 && gap + abs_err < 0.49;
  mpfr_get_z(out.rounded.get_mpz_t(), r, MPFR_RNDN);
  if (mpfr_sgn(acc) > 0) {
    mpfr_log10(t, acc, MPFR_RNDN);
    out.log10_value = mpfr_get_d(t, MPFR_RNDN);
  } else {
    out.log10_value = -HUGE_VAL;
  }
  mpfr_clears(pi, t, s, c, term, acc, r, d, static_cast<mpfr_ptr>(nullptr));

  if (out.rounded < 0) out.certified = false;
  return out;
}

mpz_class trig_count_exact(int n, int m) {
  check_count_args(n, m);
  if (n == 1) return m >= 1 ? 1 : 0;
  if (m <= 1) return 0;
  if (m >= n) return catalan(n - 1);
  for (int bits = 2 * n + 64; bits <= (1 << 24); bits *= 2) {
    TrigCount tc = trig_count(n, m, bits);
    if (tc.certified) return tc.rounded;
  }
  throw std::runtime_error("trig_count_exact: failed to certify H(" + std::to_string(n) +
                           ", " + std::to_string(m) + ")");
}

double trig_log_H(int n, int m) {
  check_count_args(n, m);
  if (m == 0 || (m == 1 && n >= 2)) return -HUGE_VAL;
  if (n == 1) return 0.0;
  if (m > n) m = n;

  // natural log of the k-sum via online log-sum-exp; the term sequence is
  // unimodal in k (single interior maximum where tan^2 t = 1/(n-1)), so once
  // we are past the peak and 60 nats down the remainder is negligible
  const int K = m / 2;
  const double w = M_PI / (m + 1);
  double best = -HUGE_VAL;
  double r = 0.0;  // sum of exp(a_k - best)
  for (int k = 1; k <= K; ++k) {
    double t = w * k;
    double a = 2.0 * std::log(std::sin(t)) + (2.0 * n - 2.0) * std::log(std::cos(t));
    if (a > best) {
      r = r * std::exp(best - a) + 1.0;
      best = a;
    } else {
      double e = std::exp(a - best);
      r += e;
      if (a < best - 60.0 && k > 1) break;
    }
  }

  // 4^n/(m+1) prefactor in double-double to keep the n-scaled term sharp
  dd lg = dd_mul(kDdLn2,
                 2.0 * static_cast<double>(n));  // n * ln 4
  lg = dd_add(lg, dd{best + std::log(r) - std::log(static_cast<double>(m + 1))});
  return lg.hi + lg.lo;
}

LogReal asymptotic_count(int n, int m) {
  check_count_args(n, m);
  if (m >= n)
    throw std::invalid_argument("asymptotic_count: requires m < n (count saturates past m = n)");
  if (m < 2) throw std::invalid_argument("asymptotic_count: requires m >= 2");
  double t = M_PI / (m + 1);
  double tan2 = std::tan(t) * std::tan(t);
  dd lg = dd_mul(kDdLn2,
                 2.0 * static_cast<double>(n));
  lg = dd_add(lg, dd{std::log(tan2) - std::log(static_cast<double>(m + 1))});
  lg = dd_sub(lg, dd_mul(dd{std::log1p(tan2)}, static_cast<double>(n)));
  return LogReal::exp_of(lg, +1);
}

LogReal logreal_from_mpz(const mpz_class& z) {
  int s = mpz_sgn(z.get_mpz_t());
  if (s == 0) return LogReal::zero();
  mpfr_t t, l;
  mpfr_init2(t, 128);
  mpfr_init2(l, 128);
  mpfr_set_z(t, z.get_mpz_t(), MPFR_RNDN);
  mpfr_abs(t, t, MPFR_RNDN);
  mpfr_log(l, t, MPFR_RNDN);
  double hi = mpfr_get_d(l, MPFR_RNDN);
  mpfr_sub_d(l, l, hi, MPFR_RNDN);
  double lo = mpfr_get_d(l, MPFR_RNDN);
  mpfr_clear(t);
  mpfr_clear(l);
  return LogReal::exp_of(dd{hi, lo}, s);
}

double log10_mpz(const mpz_class& z) { return log10_of_mpz(z); }

}  // namespace treelab
