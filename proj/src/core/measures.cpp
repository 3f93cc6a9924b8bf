#include "core/measures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace loclab {

namespace {

constexpr double kQuadTol = 1e-11;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Concave-function maximizer: expands unbounded ends until h decreases
// outward, then golden section. h must be concave on the support.
double argmax_concave(const std::function<double(double)>& h, Interval support) {
  double lo = support.lo, hi = support.hi;
  if (!std::isfinite(hi)) {
    hi = std::isfinite(lo) ? lo + 1.0 : 0.0;
    double step = 1.0;
    for (int i = 0; i < 200 && h(hi + step) >= h(hi); ++i) {
      hi += step;
      step *= 2.0;
      if (hi > 1e12) throw DivergentIntegral("divergent integral");
    }
    hi += step;
  }
  if (!std::isfinite(lo)) {
    lo = std::min(0.0, hi - 1.0);
    double step = 1.0;
    for (int i = 0; i < 200 && h(lo - step) >= h(lo); ++i) {
      lo -= step;
      step *= 2.0;
      if (lo < -1e12) throw DivergentIntegral("divergent integral");
    }
    lo -= step;
  }
  const double gr = 0.61803398874989484820;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = h(x1), f2 = h(x2);
  for (int i = 0; i < 200 && (b - a) > 1e-13 * (1.0 + std::fabs(a) + std::fabs(b)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = h(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = h(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

// ---------------------------------------------------------------------------
// Component1D

Component1D Component1D::gaussian() {
  Component1D c;
  c.kind_ = ComponentKind::kGaussian;
  c.shift_ = 0.0;
  c.scale_ = 1.0;
  c.log_norm_ = 0.0;
  c.support_ = Interval::all();
  c.decay_rate_ = kInf;
  return c;
}

Component1D Component1D::uniform(double a, double b, bool standardize) {
  if (!(a < b)) throw std::invalid_argument("Component1D: uniform needs a < b");
  Component1D c;
  c.kind_ = ComponentKind::kUniform;
  c.param_a_ = a;
  c.param_b_ = b;
  c.decay_rate_ = kInf;
  if (standardize) {
    c.standardize_numeric();
  } else {
    c.log_norm_ = std::log(b - a);
    c.support_ = Interval::of(a, b);
  }
  return c;
}

Component1D Component1D::two_sided_exponential(double rate, bool standardize) {
  if (!(rate > 0.0)) throw std::invalid_argument("Component1D: rate must be positive");
  Component1D c;
  c.kind_ = ComponentKind::kTwoSidedExponential;
  c.param_a_ = rate;
  if (standardize) {
    c.standardize_numeric();
  } else {
    c.log_norm_ = std::log(2.0 / rate);
    c.support_ = Interval::all();
    c.decay_rate_ = rate;
  }
  return c;
}

Component1D Component1D::grid_logdensity(std::vector<double> xs, std::vector<double> log_density,
                                         bool standardize) {
  if (xs.size() != log_density.size() || xs.size() < 3)
    throw std::invalid_argument("Component1D: grid needs >= 3 (x, log_density) samples");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw std::invalid_argument("Component1D: grid x values must be strictly ascending");
  // Concavity of the piecewise-linear interpolant: slopes non-increasing.
  double prev_slope = kInf;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    double slope = (log_density[i] - log_density[i - 1]) / (xs[i] - xs[i - 1]);
    if (slope > prev_slope + 1e-9)
      throw std::invalid_argument("Component1D: grid log-density is not concave");
    prev_slope = slope;
  }
  Component1D c;
  c.kind_ = ComponentKind::kGridLogDensity;
  c.grid_x_ = std::move(xs);
  c.grid_ld_ = std::move(log_density);
  c.decay_rate_ = kInf;  // compact support
  if (standardize) {
    c.standardize_numeric();
  } else {
    c.support_ = Interval::of(c.grid_x_.front(), c.grid_x_.back());
    c.log_norm_ = 0.0;
  }
  return c;
}

double Component1D::raw_log_density(double x) const {
  switch (kind_) {
    case ComponentKind::kGaussian:
      return -0.5 * x * x - 0.91893853320467274178;  // log sqrt(2 pi)
    case ComponentKind::kUniform:
      return (x >= param_a_ && x <= param_b_) ? 0.0 : -kInf;
    case ComponentKind::kTwoSidedExponential:
      return -param_a_ * std::fabs(x);
    case ComponentKind::kGridLogDensity: {
      if (x < grid_x_.front() || x > grid_x_.back()) return -kInf;
      auto it = std::upper_bound(grid_x_.begin(), grid_x_.end(), x);
      std::size_t j = std::min<std::size_t>(grid_x_.size() - 1,
                                            static_cast<std::size_t>(it - grid_x_.begin()));
      if (j == 0) j = 1;
      double w = (x - grid_x_[j - 1]) / (grid_x_[j] - grid_x_[j - 1]);
      return (1.0 - w) * grid_ld_[j - 1] + w * grid_ld_[j];
    }
  }
  return -kInf;
}

Interval Component1D::raw_support() const {
  switch (kind_) {
    case ComponentKind::kGaussian:
    case ComponentKind::kTwoSidedExponential:
      return Interval::all();
    case ComponentKind::kUniform:
      return Interval::of(param_a_, param_b_);
    case ComponentKind::kGridLogDensity:
      return Interval::of(grid_x_.front(), grid_x_.back());
  }
  return Interval::all();
}

void Component1D::standardize_numeric() {
  if (kind_ == ComponentKind::kGaussian) {
    shift_ = 0.0;
    scale_ = 1.0;
    log_norm_ = 0.0;
    support_ = Interval::all();
    decay_rate_ = kInf;
    return;
  }
  Interval sup = raw_support();
  auto ld = [this](double x) { return raw_log_density(x); };
  double peak_x = argmax_concave(ld, sup);
  double peak = ld(peak_x);
  auto density = [&](double x) { return std::exp(raw_log_density(x) - peak); };
  // Shift the variable so the quadrature's core window sits on the mass.
  auto shifted = [&](double u) { return density(peak_x + u); };
  Interval sup_sh = Interval::of(sup.lo - (std::isfinite(sup.lo) ? peak_x : 0.0),
                                 sup.hi - (std::isfinite(sup.hi) ? peak_x : 0.0));
  if (!std::isfinite(sup.lo)) sup_sh.lo = -kInf;
  if (!std::isfinite(sup.hi)) sup_sh.hi = kInf;
  double mass = adaptive_quad(shifted, sup_sh, kQuadTol);
  double mean_sh = adaptive_quad([&](double u) { return u * shifted(u); }, sup_sh, kQuadTol) / mass;
  double var = adaptive_quad([&](double u) { return (u - mean_sh) * (u - mean_sh) * shifted(u); },
                             sup_sh, kQuadTol) /
               mass;
  shift_ = peak_x + mean_sh;
  scale_ = std::sqrt(var);
  log_norm_ = peak + std::log(mass);
  Interval raw = raw_support();
  support_ = Interval::of(std::isfinite(raw.lo) ? (raw.lo - shift_) / scale_ : -kInf,
                          std::isfinite(raw.hi) ? (raw.hi - shift_) / scale_ : kInf);
  decay_rate_ =
      (kind_ == ComponentKind::kTwoSidedExponential) ? param_a_ * scale_ : kInf;
}

double Component1D::log_density(double y) const {
  // Standardized, normalized: p(y) = scale * rho(shift + scale*y) / mass.
  return raw_log_density(shift_ + scale_ * y) + std::log(scale_) - log_norm_;
}

Tilted1D Component1D::tilted(double theta, double t) const {
  if (t < 0.0) throw std::invalid_argument("Component1D: t must be >= 0");
  if (kind_ == ComponentKind::kGaussian) {
    // Conjugate closed form.
    Tilted1D r;
    r.mean = theta / (1.0 + t);
    r.var = 1.0 / (1.0 + t);
    r.log_z = 0.5 * theta * theta / (1.0 + t) - 0.5 * std::log1p(t);
    return r;
  }
  if (t == 0.0 && std::fabs(theta) >= decay_rate_) throw DivergentTilt("divergent tilt");

  auto h = [&](double y) { return log_density(y) + theta * y - 0.5 * t * y * y; };
  double peak_y = argmax_concave(h, support_);
  double m = h(peak_y);
  auto g = [&](double u) {
    double v = h(peak_y + u) - m;
    return v < -745.0 ? 0.0 : std::exp(v);
  };
  Interval sup_sh = Interval::of(std::isfinite(support_.lo) ? support_.lo - peak_y : -kInf,
                                 std::isfinite(support_.hi) ? support_.hi - peak_y : kInf);
  double mass = adaptive_quad(g, sup_sh, kQuadTol);
  double mean_sh = adaptive_quad([&](double u) { return u * g(u); }, sup_sh, kQuadTol) / mass;
  double var =
      adaptive_quad([&](double u) { return (u - mean_sh) * (u - mean_sh) * g(u); }, sup_sh,
                    kQuadTol) /
      mass;
  Tilted1D r;
  r.mean = peak_y + mean_sh;
  r.var = var;
  r.log_z = m + std::log(mass);
  return r;
}

std::string Component1D::spec_token() const {
  switch (kind_) {
    case ComponentKind::kGaussian:
      return "gauss";
    case ComponentKind::kUniform:
      return "uniform";
    case ComponentKind::kTwoSidedExponential:
      return "dexp";
    case ComponentKind::kGridLogDensity:
      return "grid";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// MeasureModel

MeasureModel MeasureModel::gaussian(std::size_t n) {
  if (n < 1) throw std::invalid_argument("MeasureModel: dim must be >= 1");
  MeasureModel m;
  m.gaussian_ = true;
  m.dim_ = n;
  m.spec_ = "gaussian(" + std::to_string(n) + ")";
  return m;
}

MeasureModel MeasureModel::product(std::vector<std::pair<Component1D, std::size_t>> components) {
  if (components.empty()) throw std::invalid_argument("MeasureModel: empty product");
  MeasureModel m;
  m.dim_ = 0;
  std::ostringstream spec;
  spec << "product(";
  for (std::size_t ci = 0; ci < components.size(); ++ci) {
    const auto& [comp, mult] = components[ci];
    if (mult < 1) throw std::invalid_argument("MeasureModel: multiplicity must be >= 1");
    for (std::size_t k = 0; k < mult; ++k) m.coord_component_.push_back(ci);
    m.dim_ += mult;
    if (ci) spec << ",";
    spec << comp.spec_token() << "*" << mult;
  }
  spec << ")";
  m.components_ = std::move(components);
  m.spec_ = spec.str();
  return m;
}

namespace {

std::pair<std::string, std::size_t> split_item(const std::string& item) {
  auto star = item.rfind('*');
  if (star == std::string::npos) return {item, 1};
  std::size_t mult = 0;
  try {
    mult = std::stoul(item.substr(star + 1));
  } catch (...) {
    throw std::invalid_argument("model spec: bad multiplicity in '" + item + "'");
  }
  return {item.substr(0, star), mult};
}

Component1D component_from_token(const std::string& token) {
  if (token == "uniform") return Component1D::uniform(0.0, 1.0);
  if (token == "dexp") return Component1D::two_sided_exponential(1.0);
  if (token == "gauss") return Component1D::gaussian();
  if (token.rfind("grid:", 0) == 0) {
    std::string path = token.substr(5);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("model spec: cannot open grid file '" + path + "'");
    std::vector<double> xs, ld;
    double x, v;
    while (in >> x >> v) {
      xs.push_back(x);
      ld.push_back(v);
    }
    return Component1D::grid_logdensity(std::move(xs), std::move(ld));
  }
  throw std::invalid_argument("model spec: unknown component '" + token + "'");
}

}  // namespace

MeasureModel MeasureModel::parse(const std::string& spec) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.rfind("gaussian(", 0) == 0 && s.back() == ')') {
    std::size_t n = 0;
    try {
      n = std::stoul(s.substr(9, s.size() - 10));
    } catch (...) {
      throw std::invalid_argument("model spec: bad dimension in '" + spec + "'");
    }
    return gaussian(n);
  }
  if (s.rfind("product(", 0) == 0 && s.back() == ')') {
    std::string body = s.substr(8, s.size() - 9);
    std::vector<std::pair<Component1D, std::size_t>> comps;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto comma = body.find(',', pos);
      std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos);
      if (item.empty()) throw std::invalid_argument("model spec: empty item in '" + spec + "'");
      auto [token, mult] = split_item(item);
      comps.emplace_back(component_from_token(token), mult);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return product(std::move(comps));
  }
  throw std::invalid_argument("model spec: cannot parse '" + spec + "'");
}

const Component1D& MeasureModel::component_at(std::size_t coord) const {
  return components_[component_index_at(coord)].first;
}

std::size_t MeasureModel::component_index_at(std::size_t coord) const {
  if (gaussian_ || coord >= dim_)
    throw std::logic_error("MeasureModel: component_at on Gaussian model or bad coordinate");
  return coord_component_[coord];
}

// ---------------------------------------------------------------------------
// Moments

Tilted1D tilted_moments_1d(const MeasureModel& model, std::size_t coord, double theta, double t) {
  if (model.is_gaussian()) {
    Tilted1D r;
    r.mean = theta / (1.0 + t);
    r.var = 1.0 / (1.0 + t);
    r.log_z = 0.5 * theta * theta / (1.0 + t) - 0.5 * std::log1p(t);
    return r;
  }
  return model.component_at(coord).tilted(theta, t);
}

Moments tilted_moments(const MeasureModel& model, const std::vector<double>& theta, double t) {
  const std::size_t n = model.dim();
  if (theta.size() != n) throw std::invalid_argument("tilted_moments: theta dimension mismatch");
  Moments m{std::vector<double>(n), SymMatrix(n), 0.0};
  double lambda_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Tilted1D r = tilted_moments_1d(model, i, theta[i], t);
    m.a[i] = r.mean;
    m.A.set(i, i, r.var);
    m.log_z += r.log_z;
    lambda_max = std::max(lambda_max, r.var);
  }
  if (t > 0.0 && lambda_max > 1.0 / t + 1e-8)
    throw std::runtime_error("tilted_moments: covariance bound lambda_max <= 1/t violated");
  return m;
}

IsotropyReport verify_isotropic(const MeasureModel& model, double tol) {
  if (tol < 1e-10) throw std::invalid_argument("verify_isotropic: tol must be >= 1e-10");
  IsotropyReport rep;
  Moments m = tilted_moments(model, std::vector<double>(model.dim(), 0.0), 0.0);
  for (std::size_t i = 0; i < model.dim(); ++i) {
    double mean_abs = std::fabs(m.a[i]);
    double var_err = std::fabs(m.A(i, i) - 1.0);
    rep.worst_mean_abs = std::max(rep.worst_mean_abs, mean_abs);
    rep.worst_var_err = std::max(rep.worst_var_err, var_err);
    if (mean_abs > tol || var_err > tol) {
      rep.pass = false;
      rep.failing_coordinates.push_back(i);
    }
  }
  return rep;
}

double operator_norm(const SymMatrix& a) {
  bool diagonal = true;
  for (std::size_t i = 0; i < a.dim() && diagonal; ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j)
      if (a(i, j) != 0.0) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::fabs(a(i, i)));
    return m;
  }
  Spectrum s = jacobi_spectrum(a, 1e-13, false);
  return std::max(std::fabs(s.eigenvalues.front()), std::fabs(s.eigenvalues.back()));
}

bool poincare_gaussian_check(double t, const Moments& moments) {
  if (!(t > 0.0)) throw std::invalid_argument("poincare_gaussian_check: t must be positive");
  return operator_norm(moments.A) <= 1.0 / t + 1e-10;
}

}  // namespace loclab
