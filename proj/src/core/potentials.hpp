#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "core/ext_real.hpp"

namespace loclab {

struct PotentialBuildError : std::runtime_error {
  explicit PotentialBuildError(const std::string& what) : std::runtime_error(what) {}
};

// Exponential-to-quadratic C^2 test potential:
//   f(r) = exp(D0 (r - r0))   for r <= r0 - 1/D0,
//   f(r) = b r^2              for r >= r0,
// joined on [r0 - 1/D0, r0] by a quintic bridge (or an exp-of-quintic
// fallback) matched to value and two derivatives at both ends. Built
// witnesses are certified a posteriori on a dense grid: f increasing,
// |f''| <= D0^2 f, b in [1/20, 1/5].
class Potential {
 public:
  struct Certificate {
    double min_slack = 0.0;        // min over grid of D0^2 f - |f''|
    double min_bridge_deriv = 0.0; // min f' over the bridge grid
    double junction_resid_left = 0.0;   // one-sided f'' mismatch, relative
    double junction_resid_right = 0.0;
    double fd_resid_left = 0.0;    // finite-difference f'' continuity, relative
    double fd_resid_right = 0.0;
    std::size_t grid_points = 0;
    bool used_fallback_bridge = false;
  };

  double d0() const { return d0_; }
  double r0() const { return r0_; }
  double b() const { return b_; }
  double left_junction() const { return r0_ - 1.0 / d0_; }
  bool fallback_bridge() const { return fallback_; }

  double value(double r) const;
  double deriv(double r) const;
  double second_deriv(double r) const;
  // log f(r); exact on the exponential branch where f underflows.
  double log_value(double r) const;

  // Bridge polynomial coefficients in the normalized coordinate
  // s = (r - (r0 - 1/D0)) * D0 in [0, 1]; for the fallback bridge these are
  // the coefficients of log f.
  const std::vector<double>& bridge_coefficients() const { return coef_; }
  const Certificate& certificate() const { return cert_; }

 private:
  friend Potential build_potential(double d0, double r0, std::size_t grid_points);
  double d0_ = 0.0, r0_ = 0.0, b_ = 0.0;
  bool fallback_ = false;
  std::vector<double> coef_;
  Certificate cert_;

  double bridge_h(double s) const;
  double bridge_h1(double s) const;
  double bridge_h2(double s) const;
};

// Searches b over [1/20, 1/5] for the bridge with the best certified slack;
// throws PotentialBuildError("construction infeasible") when no admissible b
// exists and rejects parameters outside D0 > 4, r0 in [7/3, 8/3].
// grid_points (>= 1000) sets the bridge certification grid; the global grid
// over [0, 10 r0] uses 10x as many points.
Potential build_potential(double d0, double r0, std::size_t grid_points);

// F = sum_i f(lambda_i).
double eval_F(const Potential& pot, const std::vector<double>& eigenvalues);

// Multiplicative growth bound for E F between t1 and t2, integrating
// 500/t + 144 sqrt(3) D0^2 / sqrt(t):
//   factor = (t2/t1)^500 * exp(288 sqrt(3) D0^2 (sqrt(t2) - sqrt(t1))).
ExtReal gronwall_envelope(double d0, double t1, double t2);

struct HandoffReport {
  bool pass = true;
  bool middle_vacuous = false;
  double worst_margin = 0.0;  // min over grid of (bound - f)/bound
  double worst_lambda = 0.0;
  double middle_margin = 0.0;
  double upper_margin = 0.0;
};

// Pointwise certificate for the rung handoff: on (s_prev, 8/3] require
// f_next(l) <= 6 b_prev l^2, on (8/3, 20] require f_next(l) <= 4 b_prev l^2
// (the relative margin is constant beyond the quadratic branch, so the grid
// cap at 20 loses nothing).
HandoffReport handoff_check(const Potential& pot_next, double b_prev, double s_prev,
                            std::size_t grid_points);

}  // namespace loclab
