#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "burgers/vortex.hpp"

namespace burgers {

struct EvolutionConfig {
  double dt = 5e-3;
  double t_final = 8.0;
  double fit_start = 2.0, fit_end = 8.0;  // window of the log-linear decay fit
  int record_every = 1;                   // steps between recorded samples
  static constexpr int order = 2;
  static constexpr const char* scheme = "IMEX ARS(2,2,2)";

  void validate() const;
};

/// Second-order IMEX Runge-Kutta step for du/dt = (L - alpha Lambda) u + F(u),
/// the linear part implicit (banded per-mode solves), F explicit.
class ImexStepper {
 public:
  using Explicit = std::function<ModeField(const ModeField&)>;

  ImexStepper(GridPtr grid, double alpha, double dt, Explicit f);
  double dt() const { return dt_; }
  ModeField step(const ModeField& u) const;

 private:
  double dt_;
  ResolventSolve implicit_;
  Explicit f_;
};

/// L^{alpha,lambda} w~ = (L + lambda M - alpha Lambda) w~ - v_w.grad w~ - u~.grad w
/// for the vortex alpha G + w.
ModeField apply_linearized(const VortexSolution& vortex, const ModeField& perturbation);

struct Energy {
  double norm_X_sq = 0.0;  // int f^2, f = G^{-1/2} w~
  double E = 0.0;          // int |grad f|^2 + |x|^2 f^2 / 16
};
Energy energy_functional(const ModeField& w);

/// Relative residuals of L^{alpha,lambda} d_i omega = -((1 +- lambda)/2) d_i omega.
std::pair<double, double> translation_residuals(const VortexSolution& vortex);

struct EnergySample {
  double t = 0.0;
  double norm_X = 0.0;
  double energy = 0.0;
  double mean = 0.0;
};

/// Least-squares rate mu of |w(t)|_X ~ e^{-mu t} on [t_a, t_b], with the
/// max deviation of log|w| from the fitted line.
struct DecayFit {
  double mu = 0.0;
  double residual = 0.0;
};
DecayFit fit_decay(const std::vector<EnergySample>& samples, double t_a, double t_b);

struct StabilityReport {
  double alpha = 0.0, lambda = 0.0;
  double eigen_residual_1 = 0.0, eigen_residual_2 = 0.0;
  double fitted_mu = 0.0, fit_residual = 0.0;
  std::vector<EnergySample> energy_series;
  /// min over recorded steps of -(Delta |w|_X^2 / Delta t) / |w|_X^2, i.e.
  /// the largest 1 - delta for which the discrete energy inequality holds.
  double energy_rate = 0.0;
  bool monotone = false;  // |w(t)|_X nonincreasing along the record
  std::optional<std::complex<double>> leading_eigenvalue_estimate;
  std::optional<ModeField> final_state;
};

/// Integrates d w~/dt = L^{alpha,lambda} w~ - u~.grad w~ (the last term
/// dropped when `nonlinear` is false).
StabilityReport evolve_perturbation(const VortexSolution& vortex, const ModeField& initial,
                                    const EvolutionConfig& config = {}, bool nonlinear = true);

struct Trajectory {
  std::vector<EnergySample> samples;  // norm_X is the distance to the reference, if given
  double max_mean_drift = 0.0;        // max |mean(t) - mean(0)| / |mean(0)|
  double min_ratio = 0.0;             // min over t of min(omega) / max(omega)
  std::optional<ModeField> final_state;
};

/// Full equation d omega/dt + u.grad omega = L omega + lambda M omega.
Trajectory evolve_nonlinear(const ModeField& omega0, double lambda, const EvolutionConfig& config = {},
                            const ModeField* reference = nullptr);

/// Rightmost eigenvalues of the discretized L^{alpha,lambda} on zero-mean
/// fields, from Arnoldi on the propagator over time `horizon`.
std::vector<std::complex<double>> leading_eigenvalues(const VortexSolution& vortex, int k,
                                                      double horizon = 1.0, double dt = 5e-3);

/// Largest amplitude (by doubling from 1e-3 (1 + |alpha|)) for which the
/// perturbation eps * direction / |direction|_X decays monotonically.
double estimate_basin(const VortexSolution& vortex, const ModeField& direction,
                      const EvolutionConfig& config = {}, int max_doublings = 12);

}  // namespace burgers
