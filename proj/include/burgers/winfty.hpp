#pragma once

#include <Eigen/Dense>

#include "burgers/mode_field.hpp"

namespace burgers {

/// h(r) = (r^2/4) / (e^{r^2/4} - 1), with h(0) = 1.
double h_potential(double r);

/// Decaying and regular solutions of
///   -(1/r)(r Omega')' + (4/r^2 - h) Omega = 0
/// sampled on the grid: psi_plus ~ r^{-2} at infinity, psi_minus ~ r^2 at 0.
struct HomogeneousSolutions {
  GridPtr grid;
  Eigen::VectorXd psi_plus, psi_minus;
  Eigen::VectorXd dpsi_plus, dpsi_minus;  // d/dr
  Eigen::VectorXd scaled_wronskian;       // r (psi_+ psi_-' - psi_+' psi_-)
  double w0 = 0.0;                        // Wronskian constant, taken near r = 1
  int steps_minus = 0, steps_plus = 0;    // accepted integrator steps

  /// Relative spread of r W(r) over [r_lo, r_hi].
  double wronskian_variation(double r_lo = 0.1, double r_hi = 10.0) const;
  /// Solution of -(1/r)(r Omega')' + (4/r^2 - h) Omega = S with
  /// Omega(0) = Omega(inf) = 0, by the two-sided Green-function quadrature.
  Eigen::VectorXcd green(const Eigen::VectorXcd& S) const;
};

HomogeneousSolutions solve_homogeneous(const GridPtr& grid, double tol = 1e-12);

/// Angular phase of a mode-2 right-hand side R(r) cos 2theta or R(r) sin 2theta.
enum class Phase { Cos, Sin };

struct Mode2Inversion {
  GridPtr grid;
  Phase phase = Phase::Cos;
  Eigen::VectorXd Omega;  // streamfunction amplitude
  Eigen::VectorXd omega;  // vorticity amplitude
  /// The solution field: omega sin 2theta for a cos-phase rhs,
  /// -omega cos 2theta for a sin-phase one.
  ModeField field() const;
};

/// Solve Lambda w = R(r) cos 2theta (or sin 2theta); R is a physical profile.
Mode2Inversion invert_lambda_mode2(const HomogeneousSolutions& hs, const Eigen::VectorXd& R,
                                   Phase phase);
/// Solve Lambda w = rhs for a pure mode-2 field with arbitrary phase.
ModeField invert_lambda_mode2(const HomogeneousSolutions& hs, const ModeField& rhs);

/// Direct banded solve of the same boundary-value problem (an oracle for
/// `HomogeneousSolutions::green`).
Eigen::VectorXd solve_mode2_bvp(const RadialGrid& grid, const Eigen::VectorXd& S);

struct WInftyProfile {
  HomogeneousSolutions homogeneous;
  Eigen::VectorXd Omega, omega;
  double Omega_plus = 0.0, Omega_minus = 0.0;  // fitted r^2 and r^{-2} coefficients
  double Omega_plus_integral = 0.0, Omega_minus_integral = 0.0;
  double fit_residual_plus = 0.0, fit_residual_minus = 0.0;
  double residual = 0.0;  // |Lambda w - M G|_X / |M G|_X

  double w0() const { return homogeneous.w0; }
};

struct FitWindows {
  double inner_max = 0.2;   // Omega / r^2 fitted on (0, inner_max]
  double outer_lo = 0.6;    // r^2 Omega fitted on [outer_lo, outer_hi] * r_max
  double outer_hi = 0.9;
};

struct WInfty {
  WInftyProfile profile;
  ModeField field;  // omega(r) sin 2theta
};

WInfty compute_w_infty(const GridPtr& grid, const FitWindows& windows = {});
/// z with Lambda z = L w_infty.
ModeField compute_z_infty(const HomogeneousSolutions& hs, const ModeField& w_infty);

/// Log-log slope d log|Omega| / d log r at node j.
double log_slope(const RadialGrid& grid, const Eigen::VectorXd& Omega, int j);

/// Least-squares Taylor coefficients of `profile` on (0, r_fit] in the
/// variable r / r_fit, degrees 0..degree. The defaults keep truncation of
/// the omitted powers below 1e-6 of the leading coefficient.
Eigen::VectorXd taylor_fit(const RadialGrid& grid, const Eigen::VectorXd& profile,
                           double r_fit = 0.5, int degree = 11);

}  // namespace burgers
