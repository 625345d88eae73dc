#pragma once
// Signed log-domain scalar: sign in {-1,0,+1} plus a dd log-magnitude.
// This is the carrier for partition sums, tilted counts and pmfs. Additions
// run through log-sum-exp in dd precision, so the per-operation relative
// error is ~1e-30 (contract: <= 1e-18) and drift over 1e6 chained operations
// stays far below 1e-12. Subtraction of nearly equal values loses digits the
// usual way; callers that care (exact-height counts) handle that themselves.

#include "treelab/dd.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace treelab {

class LogReal {
 public:
  LogReal() = default;  // zero

  static LogReal zero() { return LogReal(); }
  static LogReal one() { return exp_of(dd(0.0)); }

  // sgn * e^lg
  static LogReal exp_of(dd lg, int sgn = +1) {
    LogReal r;
    r.sign_ = sgn < 0 ? -1 : +1;
    r.lg_ = lg;
    return r;
  }

  static LogReal from_double(double v) {
    if (v == 0.0) return LogReal();
    return exp_of(dd(std::log(std::fabs(v))), v < 0 ? -1 : +1);
  }

  // sgn * 10^l10; inverse of log10_dd, used by the table cache
  static LogReal exp10_of(dd l10, int sgn = +1) {
    return exp_of(dd_mul(l10, kLn10), sgn);
  }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  dd log_mag() const { return lg_; }  // ln |value|; only meaningful when nonzero

  double log() const { return lg_.to_double(); }
  double log10() const { return dd_mul(lg_, kLog10e).to_double(); }
  dd log10_dd() const { return dd_mul(lg_, kLog10e); }

  double to_double() const {
    if (sign_ == 0) return 0.0;
    double m = std::exp(lg_.hi) * std::exp(lg_.lo);
    return sign_ < 0 ? -m : m;
  }

  LogReal operator-() const {
    LogReal r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  LogReal operator*(const LogReal& o) const {
    if (sign_ == 0 || o.sign_ == 0) return LogReal();
    return exp_of(dd_add(lg_, o.lg_), sign_ * o.sign_);
  }

  LogReal operator/(const LogReal& o) const {
    return exp_of(dd_sub(lg_, o.lg_), sign_ * o.sign_);  // caller avoids /0
  }

  LogReal operator+(const LogReal& o) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;
    bool swapped = dd_lt(lg_, o.lg_);
    const LogReal& big = swapped ? o : *this;
    const LogReal& small = swapped ? *this : o;
    dd d = dd_sub(big.lg_, small.lg_);  // >= 0
    if (big.sign_ == small.sign_) {
      if (d.hi > 80.0) return big;  // below dd resolution
      dd u = dd_exp(dd_neg(d));
      return exp_of(dd_add(big.lg_, dd_log1p(u)), big.sign_);
    }
    if (dd_eq(d, dd(0.0))) return LogReal();  // exact cancellation
    if (d.hi > 80.0) return big;
    dd w = dd_neg(dd_expm1(dd_neg(d)));  // 1 - e^-d in (0,1)
    return exp_of(dd_add(big.lg_, dd_log(w)), big.sign_);
  }

  LogReal operator-(const LogReal& o) const { return *this + (-o); }
  LogReal& operator+=(const LogReal& o) { return *this = *this + o; }
  LogReal& operator*=(const LogReal& o) { return *this = *this * o; }

  // value order
  bool operator<(const LogReal& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_;
    if (sign_ == 0) return false;
    return sign_ > 0 ? dd_lt(lg_, o.lg_) : dd_lt(o.lg_, lg_);
  }
  bool operator>(const LogReal& o) const { return o < *this; }

  // decimal scientific string, ~17 significant digits
  std::string to_string() const {
    if (sign_ == 0) return "0";
    dd l10 = dd_mul(lg_, kLog10e);
    double e = std::floor(l10.to_double());
    dd frac = dd_sub(l10, dd(e));
    double mant = dd_exp(dd_mul(frac, kLn10)).to_double();
    if (mant >= 10.0) {  // boundary rounding
      mant /= 10.0;
      e += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.16fe%+d", sign_ < 0 ? "-" : "", mant,
                  static_cast<int>(e));
    return buf;
  }

 private:
  static constexpr dd kLog10e{4.3429448190325181667e-01, 1.0983196502167650727e-17};
  static constexpr dd kLn10{2.3025850929940459011e+00, -2.1707562233822493508e-16};
  int sign_ = 0;
  dd lg_{0.0};
};

}  // namespace treelab
