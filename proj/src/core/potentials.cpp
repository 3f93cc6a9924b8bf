#include "core/potentials.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace loclab {

namespace {

constexpr double kInvE = 0.36787944117144232160;  // e^-1

// Quintic Hermite coefficients (monomial basis on [0,1]) from endpoint data
// (value, first, second derivative).
std::vector<double> quintic_hermite(double p0, double m0, double a0, double p1, double m1,
                                    double a1) {
  std::vector<double> c(6);
  c[0] = p0;
  c[1] = m0;
  c[2] = 0.5 * a0;
  // Remaining three from the right-endpoint conditions.
  double r0 = p1 - (c[0] + c[1] + c[2]);
  double r1 = m1 - (c[1] + 2.0 * c[2]);
  double r2 = a1 - 2.0 * c[2];
  c[3] = 10.0 * r0 - 4.0 * r1 + 0.5 * r2;
  c[4] = -15.0 * r0 + 7.0 * r1 - r2;
  c[5] = 6.0 * r0 - 3.0 * r1 + 0.5 * r2;
  return c;
}

double poly(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) v = v * s + c[j];
  return v;
}

double poly_d1(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (std::size_t j = c.size(); j-- > 1;) v = v * s + j * c[j];
  return v;
}

double poly_d2(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (std::size_t j = c.size(); j-- > 2;) v = v * s + j * (j - 1) * c[j];
  return v;
}

struct BridgeScan {
  bool feasible = false;
  double min_slack = 0.0;         // min over all bridge grid points (includes junctions)
  double objective = 0.0;         // min slack over interior points
  double min_deriv = 0.0;
};

// Evaluates the admissibility of one candidate bridge in normalized
// coordinates: H >= |H''| and H' > 0 on the grid. `fallback` interprets the
// coefficients as G = log H.
BridgeScan scan_bridge(const std::vector<double>& c, bool fallback, std::size_t grid_points) {
  BridgeScan r;
  r.min_slack = std::numeric_limits<double>::infinity();
  r.objective = r.min_slack;
  r.min_deriv = r.min_slack;
  for (std::size_t i = 0; i <= grid_points; ++i) {
    double s = static_cast<double>(i) / grid_points;
    double h, h1, h2;
    if (!fallback) {
      h = poly(c, s);
      h1 = poly_d1(c, s);
      h2 = poly_d2(c, s);
    } else {
      double g = poly(c, s), g1 = poly_d1(c, s), g2 = poly_d2(c, s);
      h = std::exp(g);
      h1 = g1 * h;
      h2 = (g2 + g1 * g1) * h;
    }
    double slack = h - std::fabs(h2);
    r.min_slack = std::min(r.min_slack, slack);
    if (i > 0 && i < grid_points) r.objective = std::min(r.objective, slack);
    r.min_deriv = std::min(r.min_deriv, h1);
  }
  r.feasible = r.min_slack >= 0.0 && r.min_deriv > 0.0;
  return r;
}

}  // namespace

double Potential::bridge_h(double s) const {
  double v = poly(coef_, s);
  return fallback_ ? std::exp(v) : v;
}

double Potential::bridge_h1(double s) const {
  if (!fallback_) return poly_d1(coef_, s);
  return poly_d1(coef_, s) * std::exp(poly(coef_, s));
}

double Potential::bridge_h2(double s) const {
  if (!fallback_) return poly_d2(coef_, s);
  double g1 = poly_d1(coef_, s), g2 = poly_d2(coef_, s);
  return (g2 + g1 * g1) * std::exp(poly(coef_, s));
}

double Potential::value(double r) const {
  if (r >= r0_) return b_ * r * r;
  if (r <= left_junction()) return std::exp(d0_ * (r - r0_));
  return bridge_h((r - left_junction()) * d0_);
}

double Potential::deriv(double r) const {
  if (r >= r0_) return 2.0 * b_ * r;
  if (r <= left_junction()) return d0_ * std::exp(d0_ * (r - r0_));
  return bridge_h1((r - left_junction()) * d0_) * d0_;
}

double Potential::second_deriv(double r) const {
  if (r >= r0_) return 2.0 * b_;
  if (r <= left_junction()) return d0_ * d0_ * std::exp(d0_ * (r - r0_));
  return bridge_h2((r - left_junction()) * d0_) * d0_ * d0_;
}

double Potential::log_value(double r) const {
  if (r >= r0_) return std::log(b_) + 2.0 * std::log(r);
  if (r <= left_junction()) return d0_ * (r - r0_);
  double s = (r - left_junction()) * d0_;
  return fallback_ ? poly(coef_, s) : std::log(poly(coef_, s));
}

Potential build_potential(double d0, double r0, std::size_t grid_points) {
  if (!(d0 > 4.0)) throw PotentialBuildError("build_potential: requires D0 > 4");
  if (!(r0 >= 7.0 / 3.0 && r0 <= 8.0 / 3.0))
    throw PotentialBuildError("build_potential: requires r0 in [7/3, 8/3]");
  if (grid_points < 1000)
    throw PotentialBuildError("build_potential: requires grid_points >= 1000");

  // Left endpoint data in normalized coordinates (s in [0,1], width 1/D0):
  // H(0) = H'(0) = H''(0) = e^-1 from the exponential branch.
  const double p0 = kInvE, m0 = kInvE, a0 = kInvE;

  struct Candidate {
    double b = 0.0;
    std::vector<double> coef;
    bool fallback = false;
    BridgeScan scan;
  };
  Candidate best;
  bool have_best = false;

  const int kScanSteps = 600;
  for (bool fallback : {false, true}) {
    for (int k = 0; k <= kScanSteps; ++k) {
      double b = 0.05 + (0.20 - 0.05) * k / kScanSteps;
      std::vector<double> coef;
      if (!fallback) {
        coef = quintic_hermite(p0, m0, a0, b * r0 * r0, 2.0 * b * r0 / d0, 2.0 * b / (d0 * d0));
      } else {
        // log-domain data: G = log f.
        double g1r = 2.0 / (r0 * d0);
        double g2r = -2.0 / (r0 * r0 * d0 * d0);
        coef = quintic_hermite(-1.0, 1.0, 0.0, std::log(b * r0 * r0), g1r, g2r);
      }
      BridgeScan scan = scan_bridge(coef, fallback, grid_points);
      if (!scan.feasible) continue;
      if (!have_best || scan.objective > best.scan.objective) {
        best = {b, std::move(coef), fallback, scan};
        have_best = true;
      }
    }
    if (have_best) break;  // prefer the quintic bridge; fall back only if it never works
  }
  if (!have_best) throw PotentialBuildError("construction infeasible");

  Potential pot;
  pot.d0_ = d0;
  pot.r0_ = r0;
  pot.b_ = best.b;
  pot.fallback_ = best.fallback;
  pot.coef_ = best.coef;

  Potential::Certificate cert;
  cert.grid_points = grid_points;
  cert.used_fallback_bridge = best.fallback;
  cert.min_bridge_deriv = best.scan.min_deriv * d0;

  // Global slack certificate over [0, 10 r0] plus the dense bridge grid.
  // On the exponential branch D0^2 f - |f''| vanishes identically; the
  // quadratic branch gives b (D0^2 r^2 - 2) > 0 for r >= r0.
  double min_slack = std::numeric_limits<double>::infinity();
  std::size_t global_points = 10 * grid_points;
  for (std::size_t i = 0; i <= global_points; ++i) {
    double r = 10.0 * r0 * static_cast<double>(i) / global_points;
    double slack;
    if (r <= pot.left_junction()) {
      slack = 0.0;
    } else if (r >= r0) {
      slack = best.b * (d0 * d0 * r * r - 2.0);
    } else {
      double s = (r - pot.left_junction()) * d0;
      slack = d0 * d0 * (pot.bridge_h(s) - std::fabs(pot.bridge_h2(s)));
    }
    min_slack = std::min(min_slack, slack);
  }
  min_slack = std::min(min_slack, best.scan.min_slack * d0 * d0);
  cert.min_slack = min_slack;

  // One-sided second derivatives at the junctions (analytic branch forms).
  double left = pot.left_junction();
  double lhs_left = d0 * d0 * std::exp(-1.0);
  double rhs_left = pot.bridge_h2(0.0) * d0 * d0;
  cert.junction_resid_left = std::fabs(lhs_left - rhs_left) / std::fabs(lhs_left);
  double lhs_right = pot.bridge_h2(1.0) * d0 * d0;
  double rhs_right = 2.0 * best.b;
  cert.junction_resid_right = std::fabs(lhs_right - rhs_right) / std::fabs(rhs_right);

  // Finite-difference cross-check, one-sided stencils on each branch. The
  // step shrinks with the bridge width so the truncation term stays below
  // the certified tolerance.
  double fd = std::min(1e-5, 1e-3 / d0);
  auto second_diff = [&](double x, double step) {
    return (pot.value(x + step) - 2.0 * pot.value(x) + pot.value(x - step)) / (step * step);
  };
  double f2_left_out = second_diff(left - 2.0 * fd, fd);
  double f2_left_in = second_diff(left + 2.0 * fd, fd);
  cert.fd_resid_left = std::fabs(f2_left_out - f2_left_in) / std::fabs(lhs_left);
  double f2_right_in = second_diff(r0 - 2.0 * fd, fd);
  double f2_right_out = second_diff(r0 + 2.0 * fd, fd);
  cert.fd_resid_right = std::fabs(f2_right_in - f2_right_out) / std::fabs(rhs_right);

  pot.cert_ = cert;
  return pot;
}

double eval_F(const Potential& pot, const std::vector<double>& eigenvalues) {
  double sum = 0.0;
  for (double l : eigenvalues) {
    if (!(l >= 0.0) || !std::isfinite(l))
      throw std::invalid_argument("eval_F: eigenvalues must be finite and >= 0");
    sum += pot.value(l);
  }
  return sum;
}

ExtReal gronwall_envelope(double d0, double t1, double t2) {
  if (!(t1 > 0.0)) throw std::invalid_argument("gronwall_envelope: t1 must be positive");
  if (!(t1 <= t2 && t2 <= 1.0))
    throw std::invalid_argument("gronwall_envelope: requires 0 < t1 <= t2 <= 1");
  long double log_factor = 500.0L * (std::log(static_cast<long double>(t2)) -
                                     std::log(static_cast<long double>(t1))) +
                           288.0L * 1.7320508075688772935L * static_cast<long double>(d0) * d0 *
                               (std::sqrt(static_cast<long double>(t2)) -
                                std::sqrt(static_cast<long double>(t1)));
  return ExtReal::from_log(log_factor);
}

HandoffReport handoff_check(const Potential& pot_next, double b_prev, double s_prev,
                            std::size_t grid_points) {
  if (!(s_prev >= 7.0 / 3.0 && s_prev <= 8.0 / 3.0))
    throw std::invalid_argument("handoff_check: s_prev must lie in [7/3, 8/3]");
  if (!(b_prev >= 0.05 && b_prev <= 0.2))
    throw std::invalid_argument("handoff_check: b_prev must lie in [1/20, 1/5]");
  if (grid_points < 2) throw std::invalid_argument("handoff_check: grid too coarse");

  HandoffReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.middle_margin = rep.worst_margin;
  rep.upper_margin = rep.worst_margin;

  const double eight_thirds = 8.0 / 3.0;
  auto scan_band = [&](double lo, double hi, double factor, double& band_margin) {
    for (std::size_t i = 1; i <= grid_points; ++i) {
      double l = lo + (hi - lo) * static_cast<double>(i) / grid_points;
      double bound = factor * b_prev * l * l;
      double margin = (bound - pot_next.value(l)) / bound;
      if (margin < band_margin) band_margin = margin;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_lambda = l;
      }
    }
  };

  if (s_prev < eight_thirds) {
    scan_band(s_prev, eight_thirds, 6.0, rep.middle_margin);
  } else {
    rep.middle_vacuous = true;
    rep.middle_margin = 0.0;
  }
  scan_band(eight_thirds, 20.0, 4.0, rep.upper_margin);
  rep.pass = rep.worst_margin >= 0.0 && (rep.middle_vacuous || rep.middle_margin >= 0.0);
  return rep;
}

}  // namespace loclab
