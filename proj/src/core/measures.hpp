#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/quadrature.hpp"
#include "core/sym_matrix.hpp"

namespace loclab {

struct DivergentTilt : std::runtime_error {
  explicit DivergentTilt(const std::string& what) : std::runtime_error(what) {}
};

enum class ComponentKind { kGaussian, kUniform, kTwoSidedExponential, kGridLogDensity };

// Moments of a tilted 1-D component: density proportional to
// exp(log_density(y) + theta*y - t*y^2/2).
struct Tilted1D {
  double mean = 0.0;
  double var = 0.0;
  double log_z = 0.0;  // log of the tilt's mass against the normalized component
};

// One coordinate of a product measure, held in standardized form
// (mean 0, variance 1). Standardization constants come from quadrature, so
// grid-specified densities go through the same path as the named kinds.
class Component1D {
 public:
  static Component1D gaussian();
  static Component1D uniform(double a, double b, bool standardize = true);
  static Component1D two_sided_exponential(double rate, bool standardize = true);
  // samples: (x, log_density), ascending in x; density treated as -inf
  // outside the grid and linearly interpolated between nodes. Rejects
  // non-concave sample sets.
  static Component1D grid_logdensity(std::vector<double> xs, std::vector<double> log_density,
                                     bool standardize = true);

  ComponentKind kind() const { return kind_; }
  double shift() const { return shift_; }
  double scale() const { return scale_; }
  Interval support() const { return support_; }
  // Exponential decay rate of the standardized density at infinity
  // (+inf for compact support or Gaussian); bounds admissible tilts at t=0.
  double decay_rate() const { return decay_rate_; }

  // Normalized log density in standardized coordinates; -inf outside support.
  double log_density(double y) const;

  Tilted1D tilted(double theta, double t) const;

  std::string spec_token() const;  // grammar token, e.g. "uniform" or "gauss"

 private:
  Component1D() = default;
  void standardize_numeric();
  double raw_log_density(double x) const;
  Interval raw_support() const;

  ComponentKind kind_ = ComponentKind::kGaussian;
  double param_a_ = 0.0, param_b_ = 0.0;  // uniform bounds or exponential rate
  std::vector<double> grid_x_, grid_ld_;
  double shift_ = 0.0, scale_ = 1.0;
  double log_norm_ = 0.0;  // log of the raw density's total mass
  Interval support_ = Interval::all();
  double decay_rate_ = 0.0;
};

// Isotropic log-concave measure: Gaussian(n) or a product of standardized
// 1-D components with multiplicities.
class MeasureModel {
 public:
  static MeasureModel gaussian(std::size_t n);
  static MeasureModel product(std::vector<std::pair<Component1D, std::size_t>> components);
  // Grammar: gaussian(N) | product(ITEM,...) with
  // ITEM := uniform*K | dexp*K | gauss*K | grid:FILE*K.
  static MeasureModel parse(const std::string& spec);

  std::size_t dim() const { return dim_; }
  bool is_gaussian() const { return gaussian_; }
  const std::vector<std::pair<Component1D, std::size_t>>& components() const {
    return components_;
  }
  const Component1D& component_at(std::size_t coord) const;
  // Index of the distinct component serving a coordinate.
  std::size_t component_index_at(std::size_t coord) const;
  const std::string& spec_string() const { return spec_; }

 private:
  MeasureModel() = default;
  bool gaussian_ = false;
  std::size_t dim_ = 0;
  std::vector<std::pair<Component1D, std::size_t>> components_;
  std::vector<std::size_t> coord_component_;
  std::string spec_;
};

struct Moments {
  std::vector<double> a;
  SymMatrix A;
  double log_z = 0.0;
};

// Moments of the tilted measure p(x) ∝ rho(x) exp(<theta, x> - t|x|^2/2).
// Checks the covariance bound lambda_max <= 1/t + 1e-8 for t > 0 on every
// construction and throws if it fails.
Moments tilted_moments(const MeasureModel& model, const std::vector<double>& theta, double t);

// Single-coordinate tilted moments (product models), bypassing the full
// vector plumbing; the ensemble driver leans on this.
Tilted1D tilted_moments_1d(const MeasureModel& model, std::size_t coord, double theta, double t);

struct IsotropyReport {
  bool pass = true;
  std::vector<std::size_t> failing_coordinates;
  double worst_mean_abs = 0.0;
  double worst_var_err = 0.0;
};

IsotropyReport verify_isotropic(const MeasureModel& model, double tol);

// Gaussian specialization of the spectral-variance bound: op norm <= 1/t.
bool poincare_gaussian_check(double t, const Moments& moments);

double operator_norm(const SymMatrix& a);

}  // namespace loclab
