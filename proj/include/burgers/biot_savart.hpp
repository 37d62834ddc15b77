#pragma once

#include <Eigen/SparseLU>
#include <memory>
#include <vector>

#include "burgers/mode_field.hpp"

namespace burgers {

/// Factorized radial Poisson operator -(d2 + d1/r - n^2/r^2) for one mode,
/// with psi ~ r^{-n} imposed beyond r_max.
class StreamSolve {
 public:
  StreamSolve(const RadialGrid& grid, int n);
  int mode() const { return n_; }
  /// psi_n from the physical vorticity profile w_n.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& w_n) const;
  const Eigen::SparseMatrix<double>& matrix() const { return op_; }

 private:
  int n_;
  Eigen::SparseMatrix<double> op_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

/// All streamfunction factorizations of a grid, built once.
class BiotSavart {
 public:
  explicit BiotSavart(GridPtr grid);

  const GridPtr& grid_ptr() const { return grid_; }
  Eigen::VectorXcd streamfunction_mode(int n, const Eigen::VectorXcd& w_n) const;
  VelocityField velocity(const ModeField& w) const;

 private:
  GridPtr grid_;
  std::vector<std::unique_ptr<StreamSolve>> solves_;  // index n - 1
};

/// Convenience wrappers that factor on every call.
Eigen::VectorXcd streamfunction_mode(const GridPtr& grid, int n, const Eigen::VectorXcd& w_n);
VelocityField velocity_from_vorticity(const ModeField& w);

/// v . grad w, evaluated on the dealiased theta grid (or on `theta_points`
/// samples when positive).
ModeField advect(const VelocityField& v, const ModeField& w, int theta_points = 0);

/// Polar components sampled on an (n_r x M) grid; lets several products
/// share one set of transforms.
struct PolarSamples {
  Eigen::MatrixXd radial, azimuthal;

  PolarSamples& operator+=(const PolarSamples& o);
  friend PolarSamples operator+(PolarSamples a, const PolarSamples& b) { return a += b; }
};

PolarSamples sample_velocity(const VelocityField& v, int theta_points);
/// G^{-1/2} (d_r w, (1/r) d_theta w) on the sample grid.
PolarSamples sample_scaled_gradient(const ModeField& w, int theta_points);
/// Pointwise v . grad w of sampled velocity and scaled gradient, projected
/// back to a field.
ModeField dot_project(GridPtr grid, const PolarSamples& v, const PolarSamples& grad);

/// Physical mode coefficients of (1/r) d_r(r v_r) + (1/r) d_theta v_theta.
Eigen::MatrixXcd divergence(const VelocityField& v);
/// Physical mode coefficients of (1/r) d_r(r v_theta) - (1/r) d_theta v_r.
Eigen::MatrixXcd curl(const VelocityField& v);

}  // namespace burgers
