#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core/ext_real.hpp"

namespace loclab {

// log x as an ExtReal, for positive x in either tier.
ExtReal ext_log(const ExtReal& x);
// log(a/b) as a saturating double (+-HUGE_VAL when the ratio is towered).
double ext_log_ratio(const ExtReal& a, const ExtReal& b);

enum class KZeroReading {
  kFirstBelow,             // k0 = first backward rung with t_k* <= t*
  kDeepestRepresentable,   // keep iterating below t* until the tower tier caps out
};

struct LadderDepthError : std::runtime_error {
  explicit LadderDepthError(const std::string& what) : std::runtime_error(what) {}
};

struct Ladder {
  double log_p = 0.0;
  double log_n = 0.0;
  double c1 = 1.0;
  ExtReal t_star;   // C1^-1 (log n)^-2
  ExtReal t1_star;  // p^-8
  bool multi_stage = false;
  bool depth_capped = false;  // deepest-representable reading hit the tower cap
  std::size_t k0 = 0;         // rung count when multi_stage
  std::vector<ExtReal> t;     // forward rungs t_1 < ... < t_k0 (t_k0 = t1_star)
  std::vector<double> s;      // thresholds s_1 .. s_{k0-1}, s_1 = 7/3
};

struct LadderParams {
  double log_p = 0.0;  // natural log of p; p > 4
  double log_n = 0.0;  // natural log of n; n >= 2
  double c1 = 1.0;     // operator-norm bound constant, > 0
  KZeroReading reading = KZeroReading::kFirstBelow;
};

// Backward recursion t_{k+1}* = exp(-(t_k*)^{-1/16}) from t_1* = p^-8,
// stopped against t* and reversed into the forward ladder; computes the
// threshold sequence s and enforces s_{k0-1} <= 15/6. Throws
// LadderDepthError when the recursion outruns the representable tower before
// reaching t*.
Ladder build_ladder(const LadderParams& params);

struct InequalityResult {
  std::string name;
  bool pass = false;
  double margin_log = 0.0;  // log(rhs) - log(lhs); positive = slack
  std::string note;
};

struct ConstantsReport {
  std::vector<InequalityResult> items;
  bool all_pass = true;
};

// Certifies the three explicit constant inequalities at (p, n, C1):
//  eq13: e^{10^4 log p + 11p/18} (e^{-2p/3} + e^{-(C1 t1*)^-1}) <= e^{-p/20}
//  eq14: (C1 t)^-1 - 1002 |log t| >= |log t|^3 on (0, t*]
//  eq15: t1* <= e^{-1000}
ConstantsReport check_constants(double log_p, double log_n, double c1);

// Smallest p (reported as log p) for which eq13 holds at the given C1.
double eq13_threshold_log_p(double c1);

// Rung bounds e^{-|log t_k|^2} n for k = 1..k0-1 followed by the final
// bound e^{-p} n.
std::vector<ExtReal> induction_targets(double log_p, const Ladder& ladder, double log_n);

struct RungZeroReport {
  bool pass = false;
  double margin_sum_log = 0.0;   // slack of term1 + term2 <= target
  double margin_eq14_log = 0.0;  // slack of the operator-norm term against e^{-|L|^3}
};

// First-rung pre-estimate: with L = log t1, checks
//   e^{-D0/3 + 10^3 |L|} + e^{-|L|^3} <= e^{-|L|^2}
// and the eq14 consequence e^{-(C1 t1)^-1 + 1002 |L|} <= e^{-|L|^3}.
// Requires t1 <= e^{-1000}.
RungZeroReport rung_zero_check(const ExtReal& t1, double d0, double c1, double log_n);

}  // namespace loclab
