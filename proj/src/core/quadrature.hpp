#pragma once

#include <functional>
#include <limits>
#include <stdexcept>

namespace loclab {

struct DivergentIntegral : std::runtime_error {
  explicit DivergentIntegral(const std::string& what) : std::runtime_error(what) {}
};

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  static Interval all() { return {}; }
  static Interval of(double lo, double hi) { return {lo, hi}; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

// Adaptive Simpson integration of g over the support. Unbounded ends are
// truncated where the integrand has fallen below e^-50 of the running peak;
// an end where it keeps growing instead raises DivergentIntegral.
// rel_tol must lie in [1e-14, 1e-6].
double adaptive_quad(const std::function<double(double)>& g, Interval support, double rel_tol);

}  // namespace loclab
