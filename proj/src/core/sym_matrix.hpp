#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace loclab {

// Dense symmetric matrix. Writes through set() mirror both triangles, so the
// stored entries satisfy (i,j) == (j,i) exactly.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {
    if (dim < 1) throw std::invalid_argument("SymMatrix: dim must be >= 1");
  }

  static SymMatrix identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.a_[i * dim + i] = 1.0;
    return m;
  }

  static SymMatrix diagonal(const std::vector<double>& d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.a_[i * d.size() + i] = d[i];
    return m;
  }

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    a_[i * dim_ + j] = v;
    a_[j * dim_ + i] = v;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += a_[i * dim_ + i];
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (double v : a_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& mutable_data() { return a_; }

 private:
  std::size_t dim_;
  std::vector<double> a_;
};

// Eigen-decomposition result; eigenvalues ascending. basis column j (stored
// row-major as basis[i*dim+j]) is the eigenvector for eigenvalues[j].
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> basis;  // empty when not requested
  std::size_t dim = 0;

  double max() const { return eigenvalues.back(); }
  double min() const { return eigenvalues.front(); }
};

// Cyclic Jacobi eigenvalue iteration. Sweeps until the off-diagonal Frobenius
// mass is below tol * ||S||_F. dim <= 512.
Spectrum jacobi_spectrum(const SymMatrix& s, double tol, bool want_basis = true);

}  // namespace loclab
