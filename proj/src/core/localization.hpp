#pragma once

#include <cstdint>
#include <vector>

#include "core/measures.hpp"
#include "core/rng.hpp"

namespace loclab {

struct TiltState {
  std::vector<double> theta;
  double t = 0.0;
};

// Euler-Maruyama step in the tilt representation:
//   theta' = theta + a(theta, t) h + sqrt(h) xi,  t' = t + h,
// with a the barycenter of the tilted measure. The untilted start
// (theta = 0, t = 0) of a standardized model uses a = 0 exactly.
TiltState em_step(const TiltState& state, const MeasureModel& model, double h,
                  const std::vector<double>& xi);

struct Trajectory {
  std::vector<double> record_times;
  std::vector<TiltState> states;
  std::vector<std::vector<double>> spectra;  // ascending eigenvalues per record
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

// Single-path driver with exact (quadrature) drift at every step. Record
// times must be multiples of h; the initial state is theta = 0, t = 0.
// Every recorded spectrum is checked against lambda_max <= 1/t + 1e-8.
Trajectory simulate_trajectory(const MeasureModel& model, const std::vector<double>& schedule,
                               double h, std::uint64_t master_seed, std::uint64_t stream_index);

struct EnsembleConfig {
  std::vector<double> schedule;
  double h = 1e-3;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 0;
  int threads = 0;       // 0: hardware concurrency
  bool dense_spectra = false;  // route records through the dense eigensolver
};

struct EnsembleResult {
  std::vector<double> record_times;
  std::size_t n_paths = 0;
  std::size_t dim = 0;
  // Indexed [path][record]; inner vectors have length dim.
  std::vector<std::vector<std::vector<double>>> spectra;
  std::vector<std::vector<std::vector<double>>> theta;
  std::vector<std::vector<double>> log_z;  // [path][record]
};

// Multi-path driver. Path i consumes stream i of the master seed, so results
// are independent of thread scheduling; drift evaluations go through
// per-step Chebyshev tables validated against the quadrature path at build
// time (out-of-range tilts fall back to exact evaluation).
EnsembleResult run_ensemble(const MeasureModel& model, const EnsembleConfig& config);

struct MartingaleEntry {
  std::vector<double> x;
  double mean = 0.0;
  double stderr_ = 0.0;
  bool pass = true;
};

struct MartingaleReport {
  // |mean - target| <= 3 stderr + kEulerBiasAllowance * h per entry.
  static constexpr double kEulerBiasAllowance = 10.0;
  std::vector<MartingaleEntry> entries;
  double horizon = 0.0;
  double h = 0.0;
  std::size_t n_paths = 0;
  bool pass = true;
};

// E[p_t(x)/p_0(x)] = 1 for each fixed x (density-ratio martingale).
MartingaleReport martingale_check(const MeasureModel& model,
                                  const std::vector<std::vector<double>>& x_points,
                                  std::size_t n_paths, double horizon, double h,
                                  std::uint64_t seed, int threads = 0);

// E[a_t] = 0 per coordinate for an isotropic start.
MartingaleReport barycenter_martingale_check(const MeasureModel& model, std::size_t n_paths,
                                             double horizon, double h, std::uint64_t seed,
                                             int threads = 0);

}  // namespace loclab
