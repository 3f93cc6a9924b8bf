#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/sym_matrix.hpp"

namespace loclab {

namespace {

double offdiag_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

}  // namespace

Spectrum jacobi_spectrum(const SymMatrix& s, double tol, bool want_basis) {
  const std::size_t n = s.dim();
  if (n > 512) throw std::invalid_argument("jacobi_spectrum: dim must be <= 512");
  if (tol <= 0.0) throw std::invalid_argument("jacobi_spectrum: tol must be positive");
  if (!s.all_finite()) throw std::invalid_argument("non-finite matrix");

  std::vector<double> a = s.data();
  std::vector<double> q;
  if (want_basis) {
    q.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) q[i * n + i] = 1.0;
  }

  const double norm = std::max(s.frobenius_norm(), 1e-300);
  const double target = tol * norm;

  for (int sweep = 0; sweep < 64 && offdiag_norm(a, n) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        double apr = a[p * n + r];
        if (std::fabs(apr) <= 1e-300) continue;
        double app = a[p * n + p], arr = a[r * n + r];
        // Rotation angle from the standard stable formulation.
        double theta = (arr - app) / (2.0 * apr);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;
        double tau = sn / (1.0 + c);

        a[p * n + p] = app - t * apr;
        a[r * n + r] = arr + t * apr;
        a[p * n + r] = 0.0;
        a[r * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == r) continue;
          double akp = a[k * n + p], akr = a[k * n + r];
          a[k * n + p] = akp - sn * (akr + tau * akp);
          a[p * n + k] = a[k * n + p];
          a[k * n + r] = akr + sn * (akp - tau * akr);
          a[r * n + k] = a[k * n + r];
        }
        if (want_basis) {
          for (std::size_t k = 0; k < n; ++k) {
            double qkp = q[k * n + p], qkr = q[k * n + r];
            q[k * n + p] = qkp - sn * (qkr + tau * qkp);
            q[k * n + r] = qkr + sn * (qkp - tau * qkr);
          }
        }
      }
    }
  }

  Spectrum out;
  out.dim = n;
  out.eigenvalues.resize(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
  for (std::size_t j = 0; j < n; ++j) out.eigenvalues[j] = diag[order[j]];
  if (want_basis) {
    out.basis.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) out.basis[i * n + j] = q[i * n + order[j]];
  }
  return out;
}

}  // namespace loclab
