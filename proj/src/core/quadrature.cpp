#include "core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace loclab {

namespace {

struct PanelIntegrator {
  const std::function<double(double)>& g;
  double abs_tol;
  int max_depth = 30;

  double simpson(double a, double b, double fa, double fm, double fb) const {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double adapt(double a, double b, double fa, double fm, double fb, double whole, double tol,
               int depth) const {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = g(lm), frm = g(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    double delta = left + right - whole;
    if (depth >= max_depth || std::fabs(delta) <= 15.0 * tol)
      return left + right + delta / 15.0;
    return adapt(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adapt(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  double integrate(double a, double b, double tol) const {
    double fa = g(a), fm = g(0.5 * (a + b)), fb = g(b);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
      throw std::invalid_argument("adaptive_quad: non-finite integrand");
    double whole = simpson(a, b, fa, fm, fb);
    return adapt(a, b, fa, fm, fb, whole, tol, 0);
  }
};

// Doubling search outward from `start` until |g| decays below peak * e^-50.
// Keeps the running peak over everything sampled so a rise toward an interior
// mode is crossed rather than mistaken for divergence.
double truncate_end(const std::function<double(double)>& g, double start, int direction,
                    double& peak) {
  double step = std::max(1.0, std::fabs(start) * 0.5);
  double x = start;
  const double decay = std::exp(-50.0);
  for (int iter = 0; iter < 2000; ++iter) {
    double next = x + direction * step;
    double v = std::fabs(g(next));
    if (!std::isfinite(v)) throw std::invalid_argument("adaptive_quad: non-finite integrand");
    peak = std::max(peak, v);
    if (v <= peak * decay) return next;
    if (std::fabs(next) > 1e9 && v >= peak * 0.999)
      throw DivergentIntegral("divergent integral");
    x = next;
    step *= 1.5;
  }
  throw DivergentIntegral("divergent integral");
}

}  // namespace

double adaptive_quad(const std::function<double(double)>& g, Interval support, double rel_tol) {
  if (!(rel_tol >= 1e-14 && rel_tol <= 1e-6))
    throw std::invalid_argument("adaptive_quad: rel_tol must be in [1e-14, 1e-6]");
  if (support.lo >= support.hi)
    throw std::invalid_argument("adaptive_quad: empty support");

  double lo = support.lo, hi = support.hi;
  if (!support.bounded()) {
    // Sample a core window to seed the running peak.
    double core_lo = std::isfinite(lo) ? lo : -1.0;
    double core_hi = std::isfinite(hi) ? hi : 1.0;
    if (core_lo >= core_hi) {
      core_lo = std::min(core_lo, core_hi) - 1.0;
      core_hi = core_lo + 2.0;
    }
    double peak = 0.0;
    for (int i = 0; i <= 16; ++i) {
      double x = core_lo + (core_hi - core_lo) * i / 16.0;
      double v = std::fabs(g(x));
      if (!std::isfinite(v)) throw std::invalid_argument("adaptive_quad: non-finite integrand");
      peak = std::max(peak, v);
    }
    if (!std::isfinite(lo)) lo = truncate_end(g, core_lo, -1, peak);
    if (!std::isfinite(hi)) hi = truncate_end(g, core_hi, +1, peak);
  }

  // Coarse composite pass fixes the error scale for the relative tolerance.
  constexpr int kSeedPanels = 64;
  double width = (hi - lo) / kSeedPanels;
  std::vector<double> nodes(kSeedPanels + 1);
  for (int i = 0; i <= kSeedPanels; ++i) nodes[i] = lo + width * i;
  double coarse = 0.0;
  for (int i = 0; i < kSeedPanels; ++i) {
    double a = nodes[i], b = nodes[i + 1], m = 0.5 * (a + b);
    coarse += (b - a) / 6.0 * (g(a) + 4.0 * g(m) + g(b));
  }
  double scale = std::max(std::fabs(coarse), 1e-300);
  PanelIntegrator integ{g, 0.0, 30};
  double total = 0.0;
  for (int i = 0; i < kSeedPanels; ++i)
    total += integ.integrate(nodes[i], nodes[i + 1], rel_tol * scale / kSeedPanels);
  return total;
}

}  // namespace loclab
