#include "core/ext_real.hpp"

#include <cmath>
#include <limits>

namespace loclab {

namespace {

constexpr long double kLogTowerLimit = 690.77552789821370520L;  // log(1e300)

// L = s * exp(m); the canonical form used for arithmetic on log magnitudes
// that may live in either tier.
struct SignedLog {
  int s = 0;
  long double m = -std::numeric_limits<long double>::infinity();
};

SignedLog sl_from(long double v) {
  if (v == 0.0L) return {};
  return {v > 0 ? +1 : -1, std::log(std::fabs(v))};
}

long double sl_to_long_double(const SignedLog& a) {
  if (a.s == 0) return 0.0L;
  if (a.m > 11300.0L) {  // exp would overflow long double
    return a.s > 0 ? std::numeric_limits<long double>::infinity()
                   : -std::numeric_limits<long double>::infinity();
  }
  return a.s * std::exp(a.m);
}

SignedLog sl_add(const SignedLog& a, const SignedLog& b) {
  if (a.s == 0) return b;
  if (b.s == 0) return a;
  if (a.s == b.s) {
    long double hi = std::max(a.m, b.m), lo = std::min(a.m, b.m);
    long double d = lo - hi;
    return {a.s, hi + (d < -11300.0L ? 0.0L : std::log1p(std::exp(d)))};
  }
  if (a.m == b.m) return {};
  const SignedLog& big = (a.m > b.m) ? a : b;
  const SignedLog& small = (a.m > b.m) ? b : a;
  long double d = small.m - big.m;
  long double corr = (d < -11300.0L) ? 0.0L : std::log1p(-std::exp(d));
  return {big.s, big.m + corr};
}

int sl_cmp(const SignedLog& a, const SignedLog& b) {
  if (a.s != b.s) return a.s < b.s ? -1 : +1;
  if (a.s == 0) return 0;
  if (a.m == b.m) return 0;
  int mag = a.m < b.m ? -1 : +1;
  return a.s > 0 ? mag : -mag;
}

}  // namespace

ExtReal ExtReal::normalize(int sign, bool towered, int log_sign, long double log_mag) {
  ExtReal r;
  if (sign == 0) return r;
  r.sign_ = static_cast<int8_t>(sign);
  if (towered && log_mag <= kLogTowerLimit) {
    // Collapses back into the plain tier.
    towered = false;
    log_mag = log_sign * std::exp(log_mag);
  }
  if (!towered && std::fabs(log_mag) > kTowerLimit) {
    towered = true;
    log_sign = log_mag > 0 ? +1 : -1;
    log_mag = std::log(std::fabs(log_mag));
  }
  r.towered_ = towered;
  r.log_sign_ = static_cast<int8_t>(towered ? log_sign : 0);
  r.log_mag_ = log_mag;
  return r;
}

ExtReal ExtReal::from_double(double v) {
  if (v == 0.0) return zero();
  if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN input");
  return normalize(v > 0 ? +1 : -1, false, 0, std::log(std::fabs(static_cast<long double>(v))));
}

ExtReal ExtReal::from_log(long double log_magnitude, int sign) {
  if (sign == 0) return zero();
  if (std::isnan(static_cast<double>(log_magnitude)))
    throw std::invalid_argument("ExtReal: NaN log magnitude");
  return normalize(sign, false, 0, log_magnitude);
}

ExtReal ExtReal::from_log_log(int sign, int log_sign, long double log_log_magnitude) {
  if (sign == 0) return zero();
  return normalize(sign, true, log_sign, log_log_magnitude);
}

ExtReal ExtReal::exp_of(const ExtReal& w) {
  if (w.is_zero()) return one();
  if (w.towered_)
    throw TowerOverflow("ExtReal: exp of a towered exponent exceeds two tiers");
  if (w.log_mag_ <= kLogTowerLimit)
    return from_log(w.sign_ * std::exp(w.log_mag_));
  return from_log_log(+1, w.sign_, w.log_mag_);
}

long double ExtReal::log_mag() const {
  if (towered_) throw std::logic_error("ExtReal: log_mag() on towered value");
  return log_mag_;
}

long double ExtReal::log_log_mag() const {
  if (!towered_) throw std::logic_error("ExtReal: log_log_mag() on plain value");
  return log_mag_;
}

double ExtReal::to_double() const {
  if (sign_ == 0) return 0.0;
  if (towered_) {
    if (log_sign_ < 0) return 0.0;
    return sign_ > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
  }
  long double v = std::exp(log_mag_);
  if (v > std::numeric_limits<double>::max())
    return sign_ > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
  return static_cast<double>(sign_ * v);
}

double ExtReal::log10_abs() const {
  if (sign_ == 0) return -HUGE_VAL;
  if (towered_) return log_sign_ > 0 ? HUGE_VAL : -HUGE_VAL;
  return static_cast<double>(log_mag_ / 2.302585092994045684L);
}

ExtReal ExtReal::operator-() const {
  ExtReal r = *this;
  r.sign_ = static_cast<int8_t>(-r.sign_);
  return r;
}

ExtReal ExtReal::abs() const {
  ExtReal r = *this;
  if (r.sign_ < 0) r.sign_ = +1;
  return r;
}

ExtReal ExtReal::pow(long double e) const {
  if (sign_ == 0) {
    if (e <= 0.0L) throw std::domain_error("ExtReal: 0 to a non-positive power");
    return zero();
  }
  if (e == 0.0L) return one();
  if (!towered_) return normalize(sign_, false, 0, log_mag_ * e);
  // L' = e * log_sign * exp(log_mag): shift on the log-log scale.
  int ls = (e > 0 ? log_sign_ : -log_sign_);
  return normalize(sign_, true, ls, log_mag_ + std::log(std::fabs(e)));
}

ExtReal ext_mul(const ExtReal& a, const ExtReal& b) {
  if (a.sign_ == 0 || b.sign_ == 0) return ExtReal::zero();
  int sign = a.sign_ * b.sign_;
  if (!a.towered_ && !b.towered_)
    return ExtReal::normalize(sign, false, 0, a.log_mag_ + b.log_mag_);
  SignedLog la = a.towered_ ? SignedLog{a.log_sign_, a.log_mag_} : sl_from(a.log_mag_);
  SignedLog lb = b.towered_ ? SignedLog{b.log_sign_, b.log_mag_} : sl_from(b.log_mag_);
  SignedLog l = sl_add(la, lb);
  if (l.s == 0) return ExtReal::from_log(0.0L, sign);
  return ExtReal::normalize(sign, true, l.s, l.m);
}

ExtReal ext_add(const ExtReal& a, const ExtReal& b) {
  if (a.sign_ == 0) return b;
  if (b.sign_ == 0) return a;
  if (!a.towered_ && !b.towered_) {
    long double hi = std::max(a.log_mag_, b.log_mag_);
    long double lo = std::min(a.log_mag_, b.log_mag_);
    long double d = lo - hi;
    if (a.sign_ == b.sign_) {
      long double corr = (d < -11300.0L) ? 0.0L : std::log1p(std::exp(d));
      return ExtReal::normalize(a.sign_, false, 0, hi + corr);
    }
    if (d == 0.0L) return ExtReal::zero();
    int sign = (a.log_mag_ > b.log_mag_) ? a.sign_ : b.sign_;
    long double corr = (d < -11300.0L) ? 0.0L : std::log1p(-std::exp(d));
    return ExtReal::normalize(sign, false, 0, hi + corr);
  }
  SignedLog la = a.towered_ ? SignedLog{a.log_sign_, a.log_mag_} : sl_from(a.log_mag_);
  SignedLog lb = b.towered_ ? SignedLog{b.log_sign_, b.log_mag_} : sl_from(b.log_mag_);
  int c = sl_cmp(la, lb);
  int big_sign = (c >= 0) ? a.sign_ : b.sign_;
  const SignedLog& lbig = (c >= 0) ? la : lb;
  const SignedLog& lsmall = (c >= 0) ? lb : la;
  if (a.sign_ == b.sign_) {
    if (c == 0) {
      // Equal magnitudes: value doubles, L gains ln 2.
      SignedLog l = sl_add(lbig, sl_from(0.69314718055994530942L));
      return ExtReal::normalize(a.sign_, true, l.s, l.m);
    }
    long double d = sl_to_long_double(sl_add(lsmall, SignedLog{-lbig.s, lbig.m}));
    long double corr = (d < -11300.0L) ? 0.0L : std::log1p(std::exp(d));
    SignedLog l = sl_add(lbig, sl_from(corr));
    return ExtReal::normalize(a.sign_, true, l.s, l.m);
  }
  // Opposite signs: cancellation.
  if (c == 0) return ExtReal::zero();
  long double d = sl_to_long_double(sl_add(lsmall, SignedLog{-lbig.s, lbig.m}));
  if (d >= 0.0L) return ExtReal::zero();  // magnitudes equal to working precision
  long double corr = (d < -11300.0L) ? 0.0L : std::log1p(-std::exp(d));
  SignedLog l = sl_add(lbig, sl_from(corr));
  return ExtReal::normalize(big_sign, true, l.s, l.m);
}

int ext_cmp(const ExtReal& a, const ExtReal& b) {
  if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : +1;
  if (a.sign_ == 0) return 0;
  SignedLog la = a.towered_ ? SignedLog{a.log_sign_, a.log_mag_} : sl_from(a.log_mag_);
  SignedLog lb = b.towered_ ? SignedLog{b.log_sign_, b.log_mag_} : sl_from(b.log_mag_);
  int c = sl_cmp(la, lb);
  return a.sign_ > 0 ? c : -c;
}

}  // namespace loclab
