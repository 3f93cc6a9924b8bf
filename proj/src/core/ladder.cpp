#include "core/ladder.hpp"

#include <cmath>

namespace loclab {

ExtReal ext_log(const ExtReal& x) {
  if (x.sign() <= 0) throw std::domain_error("ext_log: requires a positive value");
  if (!x.towered()) {
    long double l = x.log_mag();
    if (l == 0.0L) return ExtReal::zero();
    return ExtReal::from_log(std::log(std::fabs(l)), l > 0 ? +1 : -1);
  }
  return ExtReal::from_log(x.log_log_mag(), x.log_sign());
}

double ext_log_ratio(const ExtReal& a, const ExtReal& b) {
  if (a.sign() <= 0 || b.sign() <= 0)
    throw std::domain_error("ext_log_ratio: requires positive values");
  ExtReal ratio = ext_mul(a, b.pow(-1.0L));
  if (ratio.towered()) return ratio.log_sign() > 0 ? HUGE_VAL : -HUGE_VAL;
  double r = static_cast<double>(ratio.log_mag());
  return r;
}

namespace {

// t^{-1/16} of a positive rung, then e^{-that}.
ExtReal next_backward_rung(const ExtReal& t) {
  ExtReal z = t.pow(-1.0L / 16.0L);
  return ExtReal::exp_of(-z);
}

double abs_log_as_double(const ExtReal& t) {
  // |log t| saturating to +inf for towered rungs.
  if (!t.towered()) return static_cast<double>(std::fabs(t.log_mag()));
  return HUGE_VAL;
}

}  // namespace

Ladder build_ladder(const LadderParams& params) {
  if (!(params.log_p > std::log(4.0)))
    throw std::invalid_argument("build_ladder: requires p > 4");
  if (!(params.log_n >= std::log(2.0)))
    throw std::invalid_argument("build_ladder: requires n >= 2");
  if (!(params.c1 > 0.0)) throw std::invalid_argument("build_ladder: requires C1 > 0");

  Ladder ladder;
  ladder.log_p = params.log_p;
  ladder.log_n = params.log_n;
  ladder.c1 = params.c1;
  ladder.t1_star = ExtReal::from_log(-8.0L * static_cast<long double>(params.log_p));
  ladder.t_star =
      ExtReal::from_log(-(std::log(static_cast<long double>(params.c1)) +
                          2.0L * std::log(static_cast<long double>(params.log_n))));

  if (ladder.t1_star <= ladder.t_star) {
    ladder.multi_stage = false;
    return ladder;
  }
  ladder.multi_stage = true;

  std::vector<ExtReal> backward{ladder.t1_star};
  bool reached = false;
  for (int k = 0; k < 64; ++k) {
    ExtReal next;
    try {
      next = next_backward_rung(backward.back());
    } catch (const TowerOverflow&) {
      if (!reached)
        throw LadderDepthError("ladder exceeds representable depth at rung " +
                               std::to_string(backward.size()));
      ladder.depth_capped = true;
      break;
    }
    backward.push_back(next);
    if (next <= ladder.t_star) {
      reached = true;
      if (params.reading == KZeroReading::kFirstBelow) break;
    }
  }
  if (!reached)
    throw LadderDepthError("ladder exceeds representable depth at rung " +
                           std::to_string(backward.size()));

  ladder.k0 = backward.size();
  ladder.t.assign(backward.rbegin(), backward.rend());

  // s_1 = 7/3; s_{k+1} = s_k + |log t_{k+1}|^{-1/2}. Towered rungs contribute
  // an increment that underflows to zero.
  ladder.s.resize(ladder.k0 - 1);
  if (!ladder.s.empty()) {
    ladder.s[0] = 7.0 / 3.0;
    for (std::size_t k = 1; k < ladder.s.size(); ++k) {
      double abs_log = abs_log_as_double(ladder.t[k]);
      double inc = std::isinf(abs_log) ? 0.0 : 1.0 / std::sqrt(abs_log);
      ladder.s[k] = ladder.s[k - 1] + inc;
    }
  }
  if (!ladder.s.empty() && ladder.s.back() > 15.0 / 6.0)
    throw std::runtime_error("build_ladder: threshold sequence exceeds 15/6");
  return ladder;
}

namespace {

InequalityResult eq13_result(double log_p, double c1) {
  long double lp = static_cast<long double>(log_p);
  ExtReal p_term = ExtReal::from_log(lp);  // p itself
  // exponent of the prefactor: 1e4 log p + 11 p / 18
  ExtReal exp_a =
      ext_add(ExtReal::from_double(1e4 * log_p),
              ExtReal::from_log(lp + std::log(11.0L / 18.0L)));
  ExtReal prefactor = ExtReal::exp_of(exp_a);
  ExtReal term_light = ExtReal::exp_of(-ExtReal::from_log(lp + std::log(2.0L / 3.0L)));
  ExtReal term_oper =
      ExtReal::exp_of(-ExtReal::from_log(8.0L * lp - std::log(static_cast<long double>(c1))));
  ExtReal lhs = ext_mul(prefactor, ext_add(term_light, term_oper));
  ExtReal rhs = ExtReal::exp_of(-ExtReal::from_log(lp - std::log(20.0L)));
  InequalityResult r;
  r.name = "eq13";
  r.pass = lhs <= rhs;
  r.margin_log = ext_log_ratio(rhs, lhs);
  return r;
}

// h(u) = e^{-u}/C1 + 1002 u + u^3 with u = log t; the inequality is h >= 0
// on u <= u*. h' = -e^{-u}/C1 + 1002 + 3u^2.
ExtReal eq14_h(double u, double c1) {
  ExtReal exp_term = ExtReal::from_log(static_cast<long double>(-u) -
                                       std::log(static_cast<long double>(c1)));
  ExtReal linear = ExtReal::from_double(1002.0 * u);
  ExtReal cubic = ExtReal::from_double(u * u * u);
  return ext_add(ext_add(exp_term, linear), cubic);
}

bool eq14_deriv_nonpositive(double u, double c1) {
  ExtReal exp_term = ExtReal::from_log(static_cast<long double>(-u) -
                                       std::log(static_cast<long double>(c1)));
  ExtReal rest = ExtReal::from_double(1002.0 + 3.0 * u * u);
  return rest <= exp_term;
}

InequalityResult eq14_result(double log_p, double log_n, double c1) {
  (void)log_p;
  double u_star = -(std::log(c1) + 2.0 * std::log(log_n));
  InequalityResult r;
  r.name = "eq14";
  if (u_star >= 0.0) {
    r.pass = false;
    r.note = "t* >= 1: outside the bound's regime";
    return r;
  }
  // Derivative sign on a geometric log-grid over three decades of |log t|
  // below the endpoint; past that the exponential term dominates outright.
  bool monotone = true;
  constexpr int kPerDecade = 1000;
  for (int j = 0; j <= 3 * kPerDecade; ++j) {
    double u = u_star * std::pow(10.0, static_cast<double>(j) / kPerDecade);
    if (!eq14_deriv_nonpositive(u, c1)) {
      monotone = false;
      break;
    }
  }
  ExtReal h_end = eq14_h(u_star, c1);
  if (monotone) {
    r.pass = h_end.sign() >= 0;
  } else {
    // Fall back to value checks on the same grid.
    r.note = "derivative changes sign; grid value certification";
    r.pass = h_end.sign() >= 0;
    for (int j = 0; j <= 3 * kPerDecade && r.pass; ++j) {
      double u = u_star * std::pow(10.0, static_cast<double>(j) / kPerDecade);
      r.pass = eq14_h(u, c1).sign() >= 0;
    }
  }
  ExtReal pos = ExtReal::from_log(static_cast<long double>(-u_star) -
                                  std::log(static_cast<long double>(c1)));
  ExtReal neg = ExtReal::from_double(1002.0 * (-u_star) + (-u_star) * (-u_star) * (-u_star));
  r.margin_log = ext_log_ratio(pos, neg);
  return r;
}

InequalityResult eq15_result(double log_p) {
  InequalityResult r;
  r.name = "eq15";
  r.margin_log = 8.0 * log_p - 1000.0;
  r.pass = r.margin_log >= 0.0;
  return r;
}

}  // namespace

ConstantsReport check_constants(double log_p, double log_n, double c1) {
  if (!(c1 > 0.0)) throw std::invalid_argument("check_constants: requires C1 > 0");
  ConstantsReport report;
  report.items.push_back(eq13_result(log_p, c1));
  report.items.push_back(eq14_result(log_p, log_n, c1));
  report.items.push_back(eq15_result(log_p));
  for (const auto& item : report.items) report.all_pass = report.all_pass && item.pass;
  return report;
}

double eq13_threshold_log_p(double c1) {
  double lo = std::log(4.1), hi = std::log(1e10);
  if (eq13_result(lo, c1).pass) return lo;
  if (!eq13_result(hi, c1).pass)
    throw std::runtime_error("eq13_threshold_log_p: no threshold below p = 1e10");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (eq13_result(mid, c1).pass ? hi : lo) = mid;
  }
  return hi;
}

std::vector<ExtReal> induction_targets(double log_p, const Ladder& ladder, double log_n) {
  if (!ladder.multi_stage)
    throw std::invalid_argument("induction_targets: requires a multi-stage ladder");
  std::vector<ExtReal> bounds;
  ExtReal n_term = ExtReal::from_double(log_n);
  for (std::size_t k = 0; k + 1 < ladder.k0; ++k) {
    ExtReal log_t = ext_log(ladder.t[k]);
    ExtReal exponent = ext_add(-ext_mul(log_t, log_t), n_term);
    bounds.push_back(ExtReal::exp_of(exponent));
  }
  ExtReal final_exp = ext_add(ExtReal::from_log(static_cast<long double>(log_p), -1), n_term);
  bounds.push_back(ExtReal::exp_of(final_exp));
  return bounds;
}

RungZeroReport rung_zero_check(const ExtReal& t1, double d0, double c1, double log_n) {
  if (!(t1.sign() > 0)) throw std::invalid_argument("rung_zero_check: t1 must be positive");
  ExtReal regime = ExtReal::from_log(-1000.0L);
  if (!(t1 <= regime))
    throw std::invalid_argument("rung_zero_check: requires t1 <= e^-1000");
  (void)log_n;  // the dimension factor multiplies every term and cancels

  ExtReal abs_log = ext_log(t1).abs();  // |L|
  ExtReal term1_exp = ext_add(ExtReal::from_double(-d0 / 3.0),
                              ext_mul(ExtReal::from_double(1000.0), abs_log));
  ExtReal l2 = ext_mul(abs_log, abs_log);
  ExtReal l3 = ext_mul(l2, abs_log);
  ExtReal term1 = ExtReal::exp_of(term1_exp);
  ExtReal term2 = ExtReal::exp_of(-l3);
  ExtReal target = ExtReal::exp_of(-l2);

  RungZeroReport rep;
  ExtReal sum = ext_add(term1, term2);
  rep.margin_sum_log = ext_log_ratio(target, sum);
  bool sum_ok = sum <= target;

  // Operator-norm term against its eq14 envelope: (C1 t1)^-1 >= 1002|L| + |L|^3.
  ExtReal inv_c1t = ExtReal::exp_of(ext_add(abs_log, ExtReal::from_double(-std::log(c1))));
  ExtReal needed = ext_add(ext_mul(ExtReal::from_double(1002.0), abs_log), l3);
  rep.margin_eq14_log = ext_log_ratio(inv_c1t, needed);
  bool oper_ok = needed <= inv_c1t;

  rep.pass = sum_ok && oper_ok;
  return rep;
}

}  // namespace loclab
