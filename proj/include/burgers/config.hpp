#pragma once

namespace burgers {

/// Discretization parameters shared by every field on a grid.
///
/// Lengths are in units of the viscous core size (strain rate and
/// viscosity normalized to one).
struct SpectralConfig {
  double r_max = 16.0;          ///< outer radius of the computational disc
  int n_r = 512;                ///< radial node count
  int n_modes = 8;              ///< azimuthal modes n in [-N, N]
  double dealias_factor = 1.5;  ///< theta points / (2N + 1) for products
  double picard_tol = 1e-10;
  int picard_max_iter = 100;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

}  // namespace burgers
