#include "core/localization.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace loclab {

namespace {

constexpr double kLichnerowiczSlack = 1e-8;

bool is_zero_vector(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

// Chebyshev interpolant of a 1-D drift curve theta -> tilted mean at fixed t.
// Degree is grown until interleaved probe points match the quadrature values;
// build fails over to exact evaluation if even the largest degree misses.
class DriftCurve {
 public:
  DriftCurve(const Component1D& comp, double t, double range) : comp_(&comp), t_(t), range_(range) {
    for (int degree = 64; degree <= 512; degree *= 2) {
      fit(degree);
      if (validate()) {
        ok_ = true;
        return;
      }
    }
    ok_ = false;
  }

  bool ok() const { return ok_; }
  double range() const { return range_; }

  double eval(double theta) const {
    // Clenshaw recurrence on [-1, 1].
    double x = theta / range_;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = coef_.size(); j-- > 1;) {
      double b0 = 2.0 * x * b1 - b2 + coef_[j];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + coef_[0];
  }

 private:
  void fit(int degree) {
    int n = degree + 1;
    std::vector<double> fx(n);
    for (int k = 0; k < n; ++k) {
      double xk = std::cos(M_PI * (k + 0.5) / n);
      fx[k] = comp_->tilted(range_ * xk, t_).mean;
    }
    coef_.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += fx[k] * std::cos(M_PI * j * (k + 0.5) / n);
      coef_[j] = 2.0 / n * s;
    }
    coef_[0] *= 0.5;
  }

  bool validate() const {
    for (int i = 0; i < 33; ++i) {
      double theta = range_ * (-1.0 + 2.0 * (i + 0.37) / 33.0);
      double exact = comp_->tilted(theta, t_).mean;
      if (std::fabs(eval(theta) - exact) > 1e-8 * std::max(1.0, std::fabs(exact))) return false;
    }
    return true;
  }

  const Component1D* comp_;
  double t_;
  double range_;
  std::vector<double> coef_;
  bool ok_ = false;
};

// All drift curves needed by one ensemble run: one per (distinct component,
// time step with t > 0).
class DriftTables {
 public:
  DriftTables(const MeasureModel& model, double h, std::size_t n_steps) : model_(&model), h_(h) {
    if (model.is_gaussian()) return;
    const auto& comps = model.components();
    curves_.resize(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
      curves_[c].reserve(n_steps);
      for (std::size_t j = 0; j < n_steps; ++j) {
        double t = j * h;
        if (t == 0.0) {
          curves_[c].push_back(nullptr);  // exact path; only theta = 0 occurs in practice
          continue;
        }
        double range = 1.0 + 4.5 * std::sqrt(t) + 12.0 * t;
        auto curve = std::make_unique<DriftCurve>(comps[c].first, t, range);
        curves_[c].push_back(curve->ok() ? std::move(curve) : nullptr);
      }
    }
  }

  double drift(std::size_t coord, double theta, double t, std::size_t step) const {
    if (model_->is_gaussian()) return theta / (1.0 + t);
    std::size_t c = model_->component_index_at(coord);
    const auto& curve = curves_[c][step];
    if (curve && std::fabs(theta) <= curve->range()) return curve->eval(theta);
    return model_->component_at(coord).tilted(theta, t).mean;
  }

 private:
  const MeasureModel* model_;
  double h_;
  std::vector<std::vector<std::unique_ptr<DriftCurve>>> curves_;
};

std::vector<std::size_t> schedule_steps(const std::vector<double>& schedule, double h) {
  if (schedule.empty()) throw std::invalid_argument("ensemble: empty schedule");
  if (!(h > 0.0)) throw std::invalid_argument("ensemble: step size must be positive");
  std::vector<std::size_t> steps;
  double prev = -1.0;
  for (double t : schedule) {
    if (!(t >= 0.0)) throw std::invalid_argument("ensemble: record times must be >= 0");
    if (t <= prev) throw std::invalid_argument("ensemble: record times must be increasing");
    prev = t;
    double k = t / h;
    double rounded = std::round(k);
    if (std::fabs(k - rounded) > 1e-6 * std::max(1.0, rounded))
      throw std::invalid_argument("ensemble: schedule not aligned to step size");
    steps.push_back(static_cast<std::size_t>(rounded));
  }
  return steps;
}

std::vector<double> record_spectrum(const MeasureModel& model, const std::vector<double>& theta,
                                    double t, bool dense, double* log_z_out) {
  const std::size_t n = model.dim();
  std::vector<double> lambda(n);
  double log_z = 0.0;
  if (model.is_gaussian()) {
    std::fill(lambda.begin(), lambda.end(), 1.0 / (1.0 + t));
    for (double th : theta) log_z += 0.5 * th * th / (1.0 + t);
    log_z -= 0.5 * n * std::log1p(t);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      Tilted1D r = model.component_at(i).tilted(theta[i], t);
      lambda[i] = r.var;
      log_z += r.log_z;
    }
  }
  if (dense) {
    Spectrum s = jacobi_spectrum(SymMatrix::diagonal(lambda), 1e-12, false);
    lambda = s.eigenvalues;
  } else {
    std::sort(lambda.begin(), lambda.end());
  }
  if (t > 0.0 && lambda.back() > 1.0 / t + kLichnerowiczSlack)
    throw std::runtime_error("localization: covariance bound lambda_max <= 1/t violated");
  if (log_z_out) *log_z_out = log_z;
  return lambda;
}

}  // namespace

TiltState em_step(const TiltState& state, const MeasureModel& model, double h,
                  const std::vector<double>& xi) {
  if (!(h > 0.0)) throw std::invalid_argument("em_step: h must be positive");
  if (state.theta.size() != model.dim() || xi.size() != model.dim())
    throw std::invalid_argument("em_step: dimension mismatch");
  TiltState next;
  next.t = state.t + h;
  next.theta.resize(model.dim());
  double sqrt_h = std::sqrt(h);
  bool untilted_start = state.t == 0.0 && is_zero_vector(state.theta);
  for (std::size_t i = 0; i < model.dim(); ++i) {
    double a = 0.0;
    if (!untilted_start) a = tilted_moments_1d(model, i, state.theta[i], state.t).mean;
    next.theta[i] = state.theta[i] + a * h + sqrt_h * xi[i];
  }
  return next;
}

Trajectory simulate_trajectory(const MeasureModel& model, const std::vector<double>& schedule,
                               double h, std::uint64_t master_seed, std::uint64_t stream_index) {
  std::vector<std::size_t> steps = schedule_steps(schedule, h);
  Trajectory traj;
  traj.record_times = schedule;
  traj.master_seed = master_seed;
  traj.stream_index = stream_index;

  RngStream stream(master_seed, stream_index);
  TiltState state;
  state.theta.assign(model.dim(), 0.0);
  state.t = 0.0;
  std::vector<double> xi(model.dim());
  std::size_t step = 0;
  for (std::size_t rec = 0; rec < steps.size(); ++rec) {
    while (step < steps[rec]) {
      stream.fill_normal(xi.data(), xi.size());
      state = em_step(state, model, h, xi);
      ++step;
    }
    state.t = steps[rec] * h;  // records sit exactly on the grid
    traj.states.push_back(state);
    traj.spectra.push_back(record_spectrum(model, state.theta, state.t, false, nullptr));
  }
  return traj;
}

EnsembleResult run_ensemble(const MeasureModel& model, const EnsembleConfig& config) {
  std::vector<std::size_t> steps = schedule_steps(config.schedule, config.h);
  if (config.n_paths < 1) throw std::invalid_argument("ensemble: n_paths must be >= 1");
  const std::size_t n_steps = steps.back();
  const std::size_t dim = model.dim();

  DriftTables tables(model, config.h, n_steps);

  EnsembleResult out;
  out.record_times = config.schedule;
  out.n_paths = config.n_paths;
  out.dim = dim;
  out.spectra.resize(config.n_paths);
  out.theta.resize(config.n_paths);
  out.log_z.resize(config.n_paths);

  auto run_path = [&](std::size_t path) {
    RngStream stream(config.seed, path);
    std::vector<double> theta(dim, 0.0);
    std::vector<double> xi(dim);
    double sqrt_h = std::sqrt(config.h);
    std::size_t rec = 0;
    auto& spectra = out.spectra[path];
    auto& thetas = out.theta[path];
    auto& log_zs = out.log_z[path];
    for (std::size_t step = 0; step <= n_steps; ++step) {
      double t = step * config.h;
      if (rec < steps.size() && step == steps[rec]) {
        double log_z = 0.0;
        spectra.push_back(record_spectrum(model, theta, t, config.dense_spectra, &log_z));
        thetas.push_back(theta);
        log_zs.push_back(log_z);
        ++rec;
        if (rec == steps.size()) break;
      }
      stream.fill_normal(xi.data(), dim);
      bool untilted_start = t == 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        double a = untilted_start ? 0.0 : tables.drift(i, theta[i], t, step);
        theta[i] += a * config.h + sqrt_h * xi[i];
      }
    }
  };

  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(config.n_paths)));
  if (threads == 1) {
    for (std::size_t p = 0; p < config.n_paths; ++p) run_path(p);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t p = static_cast<std::size_t>(w); p < config.n_paths;
               p += static_cast<std::size_t>(threads))
            run_path(p);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  return out;
}

namespace {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& values) {
  MeanStderr r;
  double n = static_cast<double>(values.size());
  for (double v : values) r.mean += v;
  r.mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  r.stderr_ = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return r;
}

}  // namespace

MartingaleReport martingale_check(const MeasureModel& model,
                                  const std::vector<std::vector<double>>& x_points,
                                  std::size_t n_paths, double horizon, double h,
                                  std::uint64_t seed, int threads) {
  if (n_paths < 100) throw std::invalid_argument("martingale_check: n_paths must be >= 100");
  MartingaleReport report;
  report.horizon = horizon;
  report.h = h;
  report.n_paths = n_paths;

  if (horizon == 0.0) {
    for (const auto& x : x_points)
      report.entries.push_back({x, 1.0, 0.0, true});
    return report;
  }

  EnsembleConfig cfg;
  cfg.schedule = {horizon};
  cfg.h = h;
  cfg.n_paths = n_paths;
  cfg.seed = seed;
  cfg.threads = threads;
  EnsembleResult ens = run_ensemble(model, cfg);

  double allowance = MartingaleReport::kEulerBiasAllowance * h;
  for (const auto& x : x_points) {
    if (x.size() != model.dim())
      throw std::invalid_argument("martingale_check: x dimension mismatch");
    double x_sq = 0.0;
    for (double xi : x) x_sq += xi * xi;
    std::vector<double> ratios(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
      const auto& theta = ens.theta[p][0];
      double dot = 0.0;
      for (std::size_t i = 0; i < theta.size(); ++i) dot += theta[i] * x[i];
      ratios[p] = std::exp(dot - 0.5 * horizon * x_sq - ens.log_z[p][0]);
    }
    MeanStderr ms = mean_stderr(ratios);
    MartingaleEntry entry{x, ms.mean, ms.stderr_, true};
    entry.pass = std::fabs(ms.mean - 1.0) <= 3.0 * ms.stderr_ + allowance;
    report.pass = report.pass && entry.pass;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

MartingaleReport barycenter_martingale_check(const MeasureModel& model, std::size_t n_paths,
                                             double horizon, double h, std::uint64_t seed,
                                             int threads) {
  if (n_paths < 100)
    throw std::invalid_argument("barycenter_martingale_check: n_paths must be >= 100");
  MartingaleReport report;
  report.horizon = horizon;
  report.h = h;
  report.n_paths = n_paths;

  if (horizon == 0.0) {
    for (std::size_t i = 0; i < model.dim(); ++i)
      report.entries.push_back({{static_cast<double>(i)}, 0.0, 0.0, true});
    return report;
  }

  EnsembleConfig cfg;
  cfg.schedule = {horizon};
  cfg.h = h;
  cfg.n_paths = n_paths;
  cfg.seed = seed;
  cfg.threads = threads;
  EnsembleResult ens = run_ensemble(model, cfg);

  double allowance = MartingaleReport::kEulerBiasAllowance * h;
  for (std::size_t i = 0; i < model.dim(); ++i) {
    std::vector<double> means(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
      double th = ens.theta[p][0][i];
      means[p] = model.is_gaussian() ? th / (1.0 + horizon)
                                     : model.component_at(i).tilted(th, horizon).mean;
    }
    MeanStderr ms = mean_stderr(means);
    MartingaleEntry entry{{static_cast<double>(i)}, ms.mean, ms.stderr_, true};
    entry.pass = std::fabs(ms.mean) <= 3.0 * ms.stderr_ + allowance;
    report.pass = report.pass && entry.pass;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace loclab
