#pragma once
// Two-word ("double-double") floating point, ~106 mantissa bits. This is the
// carrier for log-magnitudes in LogReal; the error-free transforms are the
// classic Dekker/Knuth kernels, exp/log follow the usual argument-reduction
// plus Taylor route. Only what LogReal needs is implemented.

#include <cmath>
#include <limits>

namespace treelab {

struct dd {
  double hi = 0.0;
  double lo = 0.0;
  constexpr dd() = default;
  constexpr dd(double h) : hi(h) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}
  double to_double() const { return hi + lo; }
};

inline constexpr dd kDdLn2{6.931471805599452862e-01, 2.3190468138462995584e-17};

namespace dd_detail {

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {  // needs |a| >= |b| or a == 0
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline dd dd_add(dd a, dd b) {
  dd s = dd_detail::two_sum(a.hi, b.hi);
  dd t = dd_detail::two_sum(a.lo, b.lo);
  dd r = dd_detail::quick_two_sum(s.hi, s.lo + t.hi);
  return dd_detail::quick_two_sum(r.hi, r.lo + t.lo);
}

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }
inline dd dd_sub(dd a, dd b) { return dd_add(a, dd_neg(b)); }

inline dd dd_mul(dd a, dd b) {
  dd p = dd_detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline dd dd_mul(dd a, double b) {
  dd p = dd_detail::two_prod(a.hi, b);
  p.lo += a.lo * b;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline dd dd_div(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = dd_sub(a, dd_mul(b, q1));
  double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul(b, q2));
  double q3 = r.hi / b.hi;
  dd q = dd_detail::quick_two_sum(q1, q2);
  return dd_add(q, dd(q3));
}

inline bool dd_eq(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool dd_lt(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }

inline dd dd_ldexp(dd a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

// exp, ~1e-31 relative error over the double range
inline dd dd_exp(dd a) {
  if (a.hi <= -709.0) return dd(0.0);
  if (a.hi >= 709.0) return dd(std::numeric_limits<double>::infinity());
  static const dd kLn2(6.931471805599452862e-01, 2.3190468138462995584e-17);
  double m = std::nearbyint(a.to_double() / kLn2.hi);
  dd r = dd_sub(a, dd_mul(kLn2, m));
  r = dd_mul(r, 1.0 / 64.0);  // Taylor after scaling down, then square back up
  dd sum(1.0), term(1.0);
  for (int i = 1; i <= 24; ++i) {
    term = dd_mul(dd_mul(term, r), 1.0 / i);
    sum = dd_add(sum, term);
    if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
  }
  for (int i = 0; i < 6; ++i) sum = dd_mul(sum, sum);
  return dd_ldexp(sum, static_cast<int>(m));
}

// log for a > 0: double seed plus one dd Newton step on exp(y) = a
inline dd dd_log(dd a) {
  double y0 = std::log(a.hi);
  dd e = dd_exp(dd(-y0));
  dd t = dd_mul(a, e);
  return dd_add(dd(y0), dd_sub(t, dd(1.0)));
}

inline dd dd_expm1(dd a) {
  if (std::fabs(a.hi) > 0.3) return dd_sub(dd_exp(a), dd(1.0));
  dd sum = a, term = a;
  for (int i = 2; i <= 40; ++i) {
    term = dd_mul(dd_mul(term, a), 1.0 / i);
    sum = dd_add(sum, term);
    if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi) + 1e-320) break;
  }
  return sum;
}

inline dd dd_log1p(dd u) {
  if (std::fabs(u.hi) > 0.1) return dd_log(dd_add(dd(1.0), u));
  if (u.hi == 0.0 && u.lo == 0.0) return dd(0.0);
  dd sum = u, pw = u;
  for (int i = 2; i <= 40; ++i) {
    pw = dd_mul(pw, u);
    dd term = dd_mul(pw, (i % 2 ? 1.0 : -1.0) / i);
    sum = dd_add(sum, term);
    if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi) + 1e-320) break;
  }
  return sum;
}

}  // namespace treelab
