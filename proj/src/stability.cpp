#include "burgers/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "burgers/arnoldi.hpp"
#include "burgers/errors.hpp"

namespace burgers {

namespace {

constexpr double kPi = std::numbers::pi;

// ARS(2,2,2) coefficients.
const double kGamma = 1.0 - 1.0 / std::sqrt(2.0);
const double kDelta = 1.0 - 1.0 / (2.0 * kGamma);

double weighted_sq(const RadialGrid& g, const Eigen::VectorXcd& v) {
  return g.area_weights().dot(v.cwiseAbs2());
}

// Remove the Gaussian component so the field has zero mean.
void project_zero_mean(ModeField& w) {
  const double m = mean(w);
  if (m == 0.0) return;
  w.scaled().col(0) -= (m * sqrt_gaussian(w.grid())).cast<cplx>();
}

// Real coordinates of a field: Re f_0, then (Re f_n, Im f_n) for n >= 1.
Eigen::VectorXd pack(const ModeField& w) {
  const int nr = w.n_r(), N = w.n_modes();
  Eigen::VectorXd v(nr * (2 * N + 1));
  v.head(nr) = w.scaled().col(0).real();
  for (int n = 1; n <= N; ++n) {
    v.segment(nr * (2 * n - 1), nr) = w.scaled().col(n).real();
    v.segment(nr * (2 * n), nr) = w.scaled().col(n).imag();
  }
  return v;
}

ModeField unpack(const GridPtr& grid, const Eigen::VectorXd& v) {
  const int nr = grid->size(), N = grid->n_modes();
  ModeField w(grid);
  w.scaled().col(0) = v.head(nr).cast<cplx>();
  for (int n = 1; n <= N; ++n) {
    w.scaled().col(n).real() = v.segment(nr * (2 * n - 1), nr);
    w.scaled().col(n).imag() = v.segment(nr * (2 * n), nr);
  }
  return w;
}

void check_growth(const ModeField& u, double reference, double t) {
  const double n = norm_X(u);
  if (!std::isfinite(n) || n > 1e8 * std::max(reference, 1e-300))
    throw NumericError("time integration blew up at t = " + std::to_string(t) +
                       "; reduce dt");
}

EnergySample sample_at(double t, const ModeField& w) {
  const Energy e = energy_functional(w);
  return {t, std::sqrt(e.norm_X_sq), e.E, mean(w)};
}

// Explicit right-hand side around a fixed vortex alpha G + w: the strain
// term, the coupling to w and, optionally, the quadratic term. Samples of
// the vortex correction are computed once.
class ExplicitPart {
 public:
  ExplicitPart(const VortexSolution& vortex, bool nonlinear)
      : ops_(vortex.w.grid_ptr()),
        lambda_(vortex.lambda),
        nonlinear_(nonlinear),
        has_w_(norm_X(vortex.w) > 0.0),
        M_(vortex.w.grid().dealiased_theta_points()) {
    if (has_w_) {
      vw_ = sample_velocity(ops_.biot_savart().velocity(vortex.w), M_);
      gw_ = sample_scaled_gradient(vortex.w, M_);
    }
  }

  ModeField operator()(const ModeField& u) const {
    ModeField out = lambda_ * ops_.apply_M(u);
    if (!has_w_ && !nonlinear_) return out;
    const PolarSamples vu = sample_velocity(ops_.biot_savart().velocity(u), M_);
    const PolarSamples gu = sample_scaled_gradient(u, M_);
    const GridPtr& g = u.grid_ptr();
    if (has_w_) {
      // (v_w + v_u) . grad u + v_u . grad w, or without v_u . grad u.
      out -= dot_project(g, nonlinear_ ? vw_ + vu : vw_, gu);
      out -= dot_project(g, vu, gw_);
    } else {
      out -= dot_project(g, vu, gu);
    }
    return out;
  }

 private:
  LinearOperators ops_;
  double lambda_;
  bool nonlinear_, has_w_;
  int M_;
  PolarSamples vw_, gw_;
};

}  // namespace

void EvolutionConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt", "dt must be positive");
  if (!(t_final > 0.0)) throw ConfigError("t_final", "t_final must be positive");
  if (!(fit_start >= 0.0 && fit_start < fit_end))
    throw ConfigError("fit_window", "fit window needs 0 <= t_a < t_b");
  if (fit_end > t_final + 1e-12) throw ConfigError("fit_window", "fit window ends after t_final");
  if (record_every < 1) throw ConfigError("record_every", "record_every must be >= 1");
}

ImexStepper::ImexStepper(GridPtr grid, double alpha, double dt, Explicit f)
    : dt_(dt), implicit_(ResolventSolve::implicit_step(std::move(grid), alpha, kGamma * dt)),
      f_(std::move(f)) {}

ModeField ImexStepper::step(const ModeField& u) const {
  const double gdt = kGamma * dt_;
  const ModeField f1 = f_(u);
  const ModeField rhs2 = u + gdt * f1;
  const ModeField y2 = implicit_.solve(rhs2);
  const ModeField k2 = (1.0 / gdt) * (y2 - rhs2);  // implicit stage derivative
  const ModeField f2 = f_(y2);
  return implicit_.solve(u + (dt_ * (1.0 - kGamma)) * k2 + (dt_ * kDelta) * f1 +
                         (dt_ * (1.0 - kDelta)) * f2);
}

ModeField apply_linearized(const VortexSolution& vortex, const ModeField& perturbation) {
  require_same_grid(vortex.w.grid(), perturbation.grid());
  const LinearOperators ops(vortex.w.grid_ptr());
  ModeField out = ops.apply_L_minus(vortex.alpha, perturbation);
  out += vortex.lambda * ops.apply_M(perturbation);
  if (norm_X(vortex.w) > 0.0) {
    const BiotSavart& bs = ops.biot_savart();
    out -= advect(bs.velocity(vortex.w), perturbation);
    out -= advect(bs.velocity(perturbation), vortex.w);
  }
  return out;
}

Energy energy_functional(const ModeField& w) {
  const RadialGrid& g = w.grid();
  const Eigen::VectorXcd r = g.nodes().cast<cplx>();
  double nx = 0.0, e = 0.0;
  for (int n = 0; n <= w.n_modes(); ++n) {
    const Eigen::VectorXcd f = w.scaled().col(n);
    const double k = n == 0 ? 1.0 : 2.0;
    const double f2 = weighted_sq(g, f);
    double en = weighted_sq(g, g.d1_zero(mode_parity(n)) * f) +
                weighted_sq(g, r.cwiseProduct(f)) / 16.0;
    if (n > 0) en += double(n) * n * weighted_sq(g, f.cwiseQuotient(r));
    nx += k * f2;
    e += k * en;
  }
  return {2.0 * kPi * nx, 2.0 * kPi * e};
}

std::pair<double, double> translation_residuals(const VortexSolution& vortex) {
  const ModeField d1 = partial_x1(vortex.omega);
  const ModeField d2 = partial_x2(vortex.omega);
  const double l = vortex.lambda;
  const double r1 = norm_X(apply_linearized(vortex, d1) + (0.5 * (1.0 + l)) * d1) / norm_X(d1);
  const double r2 = norm_X(apply_linearized(vortex, d2) + (0.5 * (1.0 - l)) * d2) / norm_X(d2);
  return {r1, r2};
}

DecayFit fit_decay(const std::vector<EnergySample>& samples, double t_a, double t_b) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  int m = 0;
  for (const auto& s : samples) {
    if (s.t < t_a - 1e-12 || s.t > t_b + 1e-12 || !(s.norm_X > 0.0)) continue;
    const double y = std::log(s.norm_X);
    st += s.t, sy += y, stt += s.t * s.t, sty += s.t * y;
    ++m;
  }
  if (m < 2) throw DomainError("decay fit window holds fewer than two samples");
  const double slope = (m * sty - st * sy) / (m * stt - st * st);
  const double icpt = (sy - slope * st) / m;
  DecayFit fit{-slope, 0.0};
  for (const auto& s : samples)
    if (s.t >= t_a - 1e-12 && s.t <= t_b + 1e-12 && s.norm_X > 0.0)
      fit.residual = std::max(fit.residual, std::abs(std::log(s.norm_X) - (icpt + slope * s.t)));
  return fit;
}

StabilityReport evolve_perturbation(const VortexSolution& vortex, const ModeField& initial,
                                    const EvolutionConfig& config, bool nonlinear) {
  config.validate();
  require_same_grid(vortex.w.grid(), initial.grid());
  const double n0 = norm_X(initial);
  if (std::abs(mean(initial)) > 1e-9 * n0 + 1e-14)
    throw DomainError("perturbation must have zero mean");

  const GridPtr grid = vortex.w.grid_ptr();
  const double lambda = vortex.lambda;
  const ExplicitPart explicit_part(vortex, nonlinear);
  const ImexStepper stepper(grid, vortex.alpha, config.dt,
                            [&](const ModeField& u) { return explicit_part(u); });

  StabilityReport rep;
  rep.alpha = vortex.alpha;
  rep.lambda = lambda;
  std::tie(rep.eigen_residual_1, rep.eigen_residual_2) = translation_residuals(vortex);

  const int steps = static_cast<int>(std::lround(config.t_final / config.dt));
  ModeField u = initial;
  rep.energy_series.push_back(sample_at(0.0, u));
  for (int k = 1; k <= steps; ++k) {
    u = stepper.step(u);
    const double t = k * config.dt;
    check_growth(u, n0, t);
    if (k % config.record_every == 0 || k == steps) rep.energy_series.push_back(sample_at(t, u));
  }

  const DecayFit fit = fit_decay(rep.energy_series, config.fit_start, config.fit_end);
  rep.fitted_mu = fit.mu;
  rep.fit_residual = fit.residual;
  rep.monotone = true;
  rep.energy_rate = INFINITY;
  for (size_t i = 1; i < rep.energy_series.size(); ++i) {
    const auto& a = rep.energy_series[i - 1];
    const auto& b = rep.energy_series[i];
    if (b.norm_X > a.norm_X) rep.monotone = false;
    const double a2 = a.norm_X * a.norm_X;
    if (a2 == 0.0) continue;
    const double quotient = (b.norm_X * b.norm_X - a2) / (b.t - a.t);
    rep.energy_rate = std::min(rep.energy_rate, -quotient / a2);
  }
  rep.final_state = u;
  return rep;
}

Trajectory evolve_nonlinear(const ModeField& omega0, double lambda, const EvolutionConfig& config,
                            const ModeField* reference) {
  config.validate();
  if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("asymmetry lambda must lie in [0, 1)");
  const GridPtr grid = omega0.grid_ptr();
  if (reference) require_same_grid(*grid, reference->grid());
  const LinearOperators ops(grid);
  const BiotSavart& bs = ops.biot_savart();
  auto explicit_part = [&](const ModeField& u) {
    return lambda * ops.apply_M(u) - advect(bs.velocity(u), u);
  };
  const ImexStepper stepper(grid, 0.0, config.dt, explicit_part);

  auto record = [&](double t, const ModeField& u, Trajectory& tr) {
    EnergySample s = sample_at(t, u);
    if (reference) s.norm_X = norm_X(u - *reference);
    tr.samples.push_back(s);
    const Eigen::MatrixXd vals = synthesize(u, 64);
    const double hi = vals.maxCoeff();
    if (hi > 0.0) tr.min_ratio = std::min(tr.min_ratio, vals.minCoeff() / hi);
  };

  Trajectory tr;
  const double m0 = mean(omega0);
  const double n0 = norm_X(omega0);
  tr.min_ratio = INFINITY;
  ModeField u = omega0;
  record(0.0, u, tr);
  const int steps = static_cast<int>(std::lround(config.t_final / config.dt));
  for (int k = 1; k <= steps; ++k) {
    u = stepper.step(u);
    const double t = k * config.dt;
    check_growth(u, n0, t);
    if (m0 != 0.0) tr.max_mean_drift = std::max(tr.max_mean_drift, std::abs(mean(u) - m0) / std::abs(m0));
    if (k % config.record_every == 0 || k == steps) record(t, u, tr);
  }
  tr.final_state = u;
  return tr;
}

std::vector<std::complex<double>> leading_eigenvalues(const VortexSolution& vortex, int k,
                                                      double horizon, double dt) {
  if (k < 4) throw DomainError("leading_eigenvalues needs a subspace size k >= 4");
  if (!(horizon > 0.0 && dt > 0.0)) throw DomainError("horizon and dt must be positive");
  const GridPtr grid = vortex.w.grid_ptr();
  const ExplicitPart explicit_part(vortex, false);
  const ImexStepper stepper(grid, vortex.alpha, dt,
                            [&](const ModeField& u) { return explicit_part(u); });
  const int steps = std::max(1, static_cast<int>(std::lround(horizon / dt)));
  const double T = steps * dt;

  auto propagate = [&](const Eigen::VectorXd& v) {
    ModeField u = unpack(grid, v);
    for (int s = 0; s < steps; ++s) u = stepper.step(u);
    project_zero_mean(u);
    return pack(u);
  };
  auto inner = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return inner_X(unpack(grid, a), unpack(grid, b));
  };
  auto project = [&](Eigen::VectorXd& v) {
    ModeField u = unpack(grid, v);
    project_zero_mean(u);
    v = pack(u);
  };

  ModeField start = BandLimitedField::random(std::min(grid->n_modes(), 6), 12345).sample(grid);
  project_zero_mean(start);

  struct Ritz {
    std::complex<double> value;
    double error;
  };
  const int m0 = std::max(3 * k, k + 12);
  double worst = 0.0;
  for (int m = m0; m <= 4 * m0; m *= 2) {
    const auto res = arnoldi<double>(propagate, pack(start), m, inner, project);
    std::vector<Ritz> all;
    for (int i = 0; i < res.dimension; ++i) {
      const std::complex<double> theta = res.ritz_values(i);
      if (std::abs(theta) < 1e-14) continue;
      all.push_back({std::log(theta) / T, res.residuals(i) / std::abs(theta)});
    }
    std::sort(all.begin(), all.end(),
              [](const Ritz& a, const Ritz& b) { return a.value.real() > b.value.real(); });
    if (static_cast<int>(all.size()) < k) continue;
    worst = 0.0;
    for (int i = 0; i < k; ++i) worst = std::max(worst, all[i].error);
    if (worst > 1e-6) continue;
    std::vector<std::complex<double>> out;
    for (int i = 0; i < k; ++i) out.push_back(all[i].value);
    return out;
  }
  throw NumericError("leading eigenvalues not converged up to Krylov dimension " +
                     std::to_string(4 * m0) + " (worst residual " + std::to_string(worst) + ")");
}

double estimate_basin(const VortexSolution& vortex, const ModeField& direction,
                      const EvolutionConfig& config, int max_doublings) {
  const ModeField unit = (1.0 / norm_X(direction)) * direction;
  double eps = 1e-3 * (1.0 + std::abs(vortex.alpha));
  double best = 0.0;
  for (int i = 0; i <= max_doublings; ++i, eps *= 2.0) {
    try {
      const StabilityReport r = evolve_perturbation(vortex, eps * unit, config);
      if (!r.monotone) break;
      best = eps;
    } catch (const NumericError&) {
      break;
    }
  }
  return best;
}

}  // namespace burgers
