#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/ext_real.hpp"
#include "core/localization.hpp"
#include "core/potentials.hpp"

namespace loclab {

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

// Reference tail/moment curves from the literature; constants are inputs,
// never baked in. Required keys: c, C, C1, beta.
struct BoundCurve {
  std::string name;
  std::map<std::string, double> params;
  std::function<ExtReal(double t, double log_n, double p)> value;
  std::function<bool(double t, double log_n, double p)> in_domain;
};

std::vector<BoundCurve> reference_bounds(const std::map<std::string, double>& constants);

// log value = log(1 - e^{-1/2}) - r/c + r log r + log n.
ExtReal sharpness_lower_bound(double r, double c, double log_n);

// Per-path statistics reduced over an existing ensemble record.
McEstimate tail_estimate(const EnsembleResult& ens, std::size_t record, double threshold,
                         std::uint64_t seed);
McEstimate trace_moment_estimate(const EnsembleResult& ens, std::size_t record, double p,
                                 std::uint64_t seed);
McEstimate ef_estimate(const EnsembleResult& ens, std::size_t record, const Potential& pot,
                       std::uint64_t seed);

// Standalone estimators (one ensemble per call).
McEstimate estimate_tail(const MeasureModel& model, double t, double threshold,
                         std::size_t n_paths, double h, std::uint64_t seed, int threads = 0);
McEstimate estimate_trace_moment(const MeasureModel& model, double t, double p,
                                 std::size_t n_paths, double h, std::uint64_t seed,
                                 int threads = 0);

struct EFPoint {
  double t = 0.0;
  McEstimate est;
};

struct EFReport {
  std::vector<EFPoint> curve;
  // One entry per consecutive pair: log slack of
  // envelope * lower CI(t_a) against upper CI(t_b); >= 0 passes.
  std::vector<double> slack_log;
  bool pass = true;
};

// Grönwall consistency of the E F_t curve along increasing times, using CI
// endpoints so Monte Carlo noise cannot fail a true envelope.
EFReport estimate_EF(const MeasureModel& model, const Potential& pot,
                     const std::vector<double>& times, std::size_t n_paths, double h,
                     std::uint64_t seed, int threads = 0);

struct CheckResult {
  std::string name;
  bool pass = true;
  double margin = 0.0;
  std::string detail;
  bool regime = false;  // expected failure outside the inequality's regime
};

struct SuiteReport {
  std::string suite;
  bool pass = true;
  std::vector<CheckResult> checks;
};

// Named verification suites: gaussian-oracle, lichnerowicz, martingale,
// potential, ladder, handoff, gronwall, or all.
SuiteReport verify_suite(const std::string& name, const LabConfig& config);

std::vector<std::string> verify_suite_names();

// Default test matrix shared by the suites and the CLI.
std::vector<std::string> default_model_specs();
std::vector<double> default_times();

}  // namespace loclab
