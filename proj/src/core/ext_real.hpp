#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace loclab {

// Thrown when a value would need a third exponential tier (log(log(log|x|))).
struct TowerOverflow : std::runtime_error {
  explicit TowerOverflow(const std::string& what) : std::runtime_error(what) {}
};

// Signed scalar stored on the natural-log scale: value = sign * exp(L).
//
// L itself is kept as an 80-bit long double while |L| <= kTowerLimit; beyond
// that only (sgn L, log|L|) is retained (the "tower" tier), which is enough
// for order comparisons and multiplicative arithmetic on quantities like
// exp(-exp(62.5)). A value whose log-log would again overflow raises
// TowerOverflow instead of silently degrading.
class ExtReal {
 public:
  static constexpr long double kTowerLimit = 1e300L;

  ExtReal() = default;

  static ExtReal zero() { return ExtReal(); }
  static ExtReal one() { return from_log(0.0L); }
  static ExtReal from_double(double v);
  // value = sign * exp(log_magnitude)
  static ExtReal from_log(long double log_magnitude, int sign = +1);
  // value = sign * exp(log_sign * exp(log_log_magnitude)); collapses to the
  // plain tier when the inner exponent is small enough to store directly.
  static ExtReal from_log_log(int sign, int log_sign, long double log_log_magnitude);
  // e^w for an ExtReal exponent w. Throws TowerOverflow when w is towered
  // (the result would need a third tier).
  static ExtReal exp_of(const ExtReal& w);

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  bool towered() const { return towered_; }

  // Valid when !towered(): L such that value = sign * exp(L).
  long double log_mag() const;
  // Valid when towered(): sign of L and log|L|.
  int log_sign() const { return log_sign_; }
  long double log_log_mag() const;

  // Saturating conversions.
  double to_double() const;
  double log10_abs() const;  // log10|value|; -HUGE_VAL for zero, +/-HUGE_VAL for towers

  ExtReal operator-() const;
  ExtReal abs() const;
  // |x|^e keeping the sign of x (used with x > 0 throughout).
  ExtReal pow(long double e) const;

  friend ExtReal ext_mul(const ExtReal& a, const ExtReal& b);
  friend ExtReal ext_add(const ExtReal& a, const ExtReal& b);
  // Total order: -1, 0, +1.
  friend int ext_cmp(const ExtReal& a, const ExtReal& b);

 private:
  int8_t sign_ = 0;       // -1, 0, +1
  bool towered_ = false;  // true: L = log_sign_ * exp(log_mag_)
  int8_t log_sign_ = 0;
  long double log_mag_ = 0.0L;  // L directly, or log|L| when towered

  static ExtReal normalize(int sign, bool towered, int log_sign, long double log_mag);
};

ExtReal ext_mul(const ExtReal& a, const ExtReal& b);
ExtReal ext_add(const ExtReal& a, const ExtReal& b);
int ext_cmp(const ExtReal& a, const ExtReal& b);

inline ExtReal operator*(const ExtReal& a, const ExtReal& b) { return ext_mul(a, b); }
inline ExtReal operator+(const ExtReal& a, const ExtReal& b) { return ext_add(a, b); }
inline ExtReal operator-(const ExtReal& a, const ExtReal& b) { return ext_add(a, -b); }
inline bool operator<(const ExtReal& a, const ExtReal& b) { return ext_cmp(a, b) < 0; }
inline bool operator>(const ExtReal& a, const ExtReal& b) { return ext_cmp(a, b) > 0; }
inline bool operator<=(const ExtReal& a, const ExtReal& b) { return ext_cmp(a, b) <= 0; }
inline bool operator>=(const ExtReal& a, const ExtReal& b) { return ext_cmp(a, b) >= 0; }
inline bool operator==(const ExtReal& a, const ExtReal& b) { return ext_cmp(a, b) == 0; }

}  // namespace loclab
