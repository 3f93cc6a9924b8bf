#include "core/harness.hpp"

#include <algorithm>
#include <cmath>

#include "core/ladder.hpp"

namespace loclab {

namespace {

McEstimate reduce(const std::vector<double>& per_path, std::uint64_t seed) {
  McEstimate est;
  est.n_paths = per_path.size();
  est.seed = seed;
  double n = static_cast<double>(per_path.size());
  for (double v : per_path) est.mean += v;
  est.mean /= n;
  double ss = 0.0;
  for (double v : per_path) ss += (v - est.mean) * (v - est.mean);
  est.stderr_ = per_path.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return est;
}

}  // namespace

std::vector<BoundCurve> reference_bounds(const std::map<std::string, double>& constants) {
  for (const char* key : {"c", "C", "C1", "beta"})
    if (!constants.count(key))
      throw std::invalid_argument(std::string("reference_bounds: missing constant '") + key +
                                  "'");
  double c = constants.at("c");
  double C = constants.at("C");
  double C1 = constants.at("C1");
  double beta = constants.at("beta");

  std::vector<BoundCurve> curves;
  curves.push_back(
      {"lv_max_deviation",
       {{"C", C}},
       [C](double t, double, double) {
         return ext_mul(ExtReal::from_double(4.0),
                        ExtReal::exp_of(ExtReal::from_double(-1.0 / (C * t))));
       },
       [C](double t, double log_n, double) {
         return t > 0.0 && t <= 1.0 / (2.0 * C * std::exp(0.5 * log_n));
       }});
  curves.push_back(
      {"oper_norm",
       {{"C1", C1}},
       [C1](double t, double, double) {
         if (t == 0.0) return ExtReal::zero();
         return ExtReal::exp_of(ExtReal::from_double(-1.0 / (C1 * t)));
       },
       [C1](double t, double log_n, double) {
         return t >= 0.0 && t <= 1.0 / (C1 * log_n * log_n);
       }});
  curves.push_back(
      {"tail_threshold2",
       {{"c", c}},
       [c](double t, double log_n, double) {
         return ext_mul(ExtReal::from_double(2.0),
                        ExtReal::exp_of(ExtReal::from_double(-c / t + log_n)));
       },
       [](double t, double, double) { return t > 0.0; }});
  curves.push_back(
      {"tail_threshold8_3",
       {{"c", c}},
       [c](double t, double log_n, double) {
         return ext_mul(ExtReal::from_double(2.0),
                        ExtReal::exp_of(ExtReal::from_double(-c / std::sqrt(t) + log_n)));
       },
       [](double t, double, double) { return t > 0.0; }});
  curves.push_back(
      {"p_moment",
       {{"C", C}, {"beta", beta}},
       [C, beta](double, double log_n, double p) {
         return ExtReal::exp_of(
             ExtReal::from_double(beta * p * std::log(C * p) + log_n));
       },
       [](double, double, double p) { return p >= 1.0; }});
  return curves;
}

ExtReal sharpness_lower_bound(double r, double c, double log_n) {
  if (!(r > 0.0) || !(c > 0.0))
    throw std::invalid_argument("sharpness_lower_bound: requires r > 0 and c > 0");
  // log(1 - e^{-1/2}) - r/c + r log r + log n
  long double log_front = std::log(1.0L - std::exp(-0.5L));
  long double exponent = log_front - static_cast<long double>(r) / c +
                         static_cast<long double>(r) * std::log(static_cast<long double>(r)) +
                         static_cast<long double>(log_n);
  return ExtReal::from_log(exponent);
}

McEstimate tail_estimate(const EnsembleResult& ens, std::size_t record, double threshold,
                         std::uint64_t seed) {
  std::vector<double> counts(ens.n_paths);
  for (std::size_t p = 0; p < ens.n_paths; ++p) {
    double c = 0.0;
    for (double l : ens.spectra[p][record])
      if (l > threshold) c += 1.0;
    counts[p] = c;
  }
  return reduce(counts, seed);
}

McEstimate trace_moment_estimate(const EnsembleResult& ens, std::size_t record, double p_exp,
                                 std::uint64_t seed) {
  std::vector<double> traces(ens.n_paths);
  for (std::size_t p = 0; p < ens.n_paths; ++p) {
    double sum = 0.0;
    for (double l : ens.spectra[p][record]) sum += std::pow(l, p_exp);
    traces[p] = sum;
  }
  return reduce(traces, seed);
}

McEstimate ef_estimate(const EnsembleResult& ens, std::size_t record, const Potential& pot,
                       std::uint64_t seed) {
  std::vector<double> values(ens.n_paths);
  for (std::size_t p = 0; p < ens.n_paths; ++p) values[p] = eval_F(pot, ens.spectra[p][record]);
  return reduce(values, seed);
}

namespace {

EnsembleResult run_schedule(const MeasureModel& model, const std::vector<double>& schedule,
                            std::size_t n_paths, double h, std::uint64_t seed, int threads) {
  EnsembleConfig cfg;
  cfg.schedule = schedule;
  cfg.h = h;
  cfg.n_paths = n_paths;
  cfg.seed = seed;
  cfg.threads = threads;
  return run_ensemble(model, cfg);
}

}  // namespace

McEstimate estimate_tail(const MeasureModel& model, double t, double threshold,
                         std::size_t n_paths, double h, std::uint64_t seed, int threads) {
  if (!(threshold > 0.0)) throw std::invalid_argument("estimate_tail: threshold must be > 0");
  if (!(t > 0.0)) throw std::invalid_argument("estimate_tail: t must be > 0");
  EnsembleResult ens = run_schedule(model, {t}, n_paths, h, seed, threads);
  return tail_estimate(ens, 0, threshold, seed);
}

McEstimate estimate_trace_moment(const MeasureModel& model, double t, double p,
                                 std::size_t n_paths, double h, std::uint64_t seed, int threads) {
  if (!(p >= 1.0)) throw std::invalid_argument("estimate_trace_moment: p must be >= 1");
  if (t == 0.0) {
    // A_0 is the model covariance; no simulation involved.
    Moments m = tilted_moments(model, std::vector<double>(model.dim(), 0.0), 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < model.dim(); ++i) sum += std::pow(m.A(i, i), p);
    return {sum, 0.0, n_paths, seed};
  }
  EnsembleResult ens = run_schedule(model, {t}, n_paths, h, seed, threads);
  return trace_moment_estimate(ens, 0, p, seed);
}

EFReport estimate_EF(const MeasureModel& model, const Potential& pot,
                     const std::vector<double>& times, std::size_t n_paths, double h,
                     std::uint64_t seed, int threads) {
  if (times.empty() || !(times.front() > 0.0))
    throw std::invalid_argument("estimate_EF: times must start above 0");
  EnsembleResult ens = run_schedule(model, times, n_paths, h, seed, threads);
  EFReport report;
  for (std::size_t r = 0; r < times.size(); ++r)
    report.curve.push_back({times[r], ef_estimate(ens, r, pot, seed)});
  for (std::size_t r = 0; r + 1 < times.size(); ++r) {
    const McEstimate& a = report.curve[r].est;
    const McEstimate& b = report.curve[r + 1].est;
    double lower_a = std::max(a.mean - 3.0 * a.stderr_, 1e-300);
    double upper_b = b.mean + 3.0 * b.stderr_;
    ExtReal budget = ext_mul(gronwall_envelope(pot.d0(), times[r], times[r + 1]),
                             ExtReal::from_double(lower_a));
    double slack = ext_log_ratio(budget, ExtReal::from_double(std::max(upper_b, 1e-300)));
    report.slack_log.push_back(slack);
    report.pass = report.pass && slack >= 0.0;
  }
  return report;
}

std::vector<std::string> default_model_specs() {
  return {"gaussian(8)", "product(uniform*8)", "product(dexp*8)",
          "product(uniform*4,dexp*4)"};
}

std::vector<double> default_times() { return {0.05, 0.1, 0.2, 0.375, 1.0}; }

}  // namespace loclab
