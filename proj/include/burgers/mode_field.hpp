#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "burgers/grid.hpp"

namespace burgers {

using cplx = std::complex<double>;

/// Real scalar field on the disc, stored as azimuthal Fourier modes 0..N.
///
/// Column n of `scaled()` holds f_n = G^{-1/2} c_n, where c_n(r) is the
/// physical coefficient of e^{i n theta}. Negative modes are implied by
/// reality, c_{-n} = conj(c_n). Working with f keeps the Gaussian-weighted
/// norms free of e^{+r^2/4} factors.
class ModeField {
 public:
  explicit ModeField(GridPtr grid);
  ModeField(GridPtr grid, Eigen::MatrixXcd scaled);

  static ModeField from_physical(GridPtr grid, const Eigen::MatrixXcd& coeffs);
  /// From an n_r x (2N+1) array whose column k holds mode k - N.
  /// Only modes >= 0 are kept; the caller is responsible for reality.
  static ModeField from_full(GridPtr grid, const Eigen::MatrixXcd& full);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int n_modes() const { return static_cast<int>(f_.cols()) - 1; }
  int n_r() const { return static_cast<int>(f_.rows()); }

  const Eigen::MatrixXcd& scaled() const { return f_; }
  Eigen::MatrixXcd& scaled() { return f_; }

  /// Rescaled profile of mode n, any sign of n (zero beyond N).
  Eigen::VectorXcd scaled_mode(int n) const;
  Eigen::VectorXcd physical_mode(int n) const;
  Eigen::MatrixXcd physical() const;
  Eigen::MatrixXcd full() const;

  /// Value at a Cartesian point that is also a grid radius.
  double value_at_node(int j, double theta) const;

  ModeField& operator+=(const ModeField& o);
  ModeField& operator-=(const ModeField& o);
  ModeField& operator*=(double s);

  friend ModeField operator+(ModeField a, const ModeField& b) { return a += b; }
  friend ModeField operator-(ModeField a, const ModeField& b) { return a -= b; }
  friend ModeField operator*(double s, ModeField a) { return a *= s; }
  friend ModeField operator*(ModeField a, double s) { return a *= s; }
  friend ModeField operator-(ModeField a) { return a *= -1.0; }

 private:
  GridPtr grid_;
  Eigen::MatrixXcd f_;
};

/// Velocity in polar components, per mode 0..N (negative modes by reality).
/// Stored in physical units, not rescaled: velocities decay only like 1/r.
struct VelocityField {
  GridPtr grid;
  Eigen::MatrixXcd radial;     // v_{r,n}(r_j)
  Eigen::MatrixXcd azimuthal;  // v_{theta,n}(r_j)

  explicit VelocityField(GridPtr g);
  int n_modes() const { return static_cast<int>(radial.cols()) - 1; }
  Eigen::MatrixXcd full_radial() const;
  Eigen::MatrixXcd full_azimuthal() const;

  VelocityField& operator+=(const VelocityField& o);
  VelocityField& operator*=(double s);
  friend VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
  friend VelocityField operator*(double s, VelocityField a) { return a *= s; }
};

void require_same_grid(const RadialGrid& a, const RadialGrid& b);

/// g^{1/2}(r_j) = e^{-r^2/8} / sqrt(4 pi): the rescaled Gaussian.
Eigen::VectorXd sqrt_gaussian(const RadialGrid& grid);
double gaussian(double r);

ModeField gaussian_profile(GridPtr grid);
VelocityField vG_profile(GridPtr grid);
/// Equilibrium of the linear drift operator under asymmetric strain.
ModeField g_lambda_profile(double lambda, GridPtr grid);
/// Strain operator applied to the Gaussian: -(r^2/4) g cos 2 theta.
ModeField mg_profile(GridPtr grid);

double mean(const ModeField& w);
double inner_X(const ModeField& a, const ModeField& b);
double norm_X(const ModeField& w);
double norm_Y(const ModeField& w);
/// X-norm of the highest retained mode pair; a truncation monitor.
double highest_mode_norm(const ModeField& w);
/// X-norm of the modes |n| >= n_min.
double tail_norm(const ModeField& w, int n_min);

/// Physical derivatives d/dx1, d/dx2, returned as fields. Output mode N+1 is
/// dropped.
ModeField partial_x1(const ModeField& w);
ModeField partial_x2(const ModeField& w);

/// Physical samples on the polar tensor grid: rows r_j, columns
/// theta_m = 2 pi m / theta_points.
Eigen::MatrixXd synthesize(const ModeField& w, int theta_points);
/// Inverse of `synthesize`: keeps modes 0..N of the sampled field.
ModeField project(GridPtr grid, const Eigen::MatrixXd& samples);

/// Synthesis and projection on full (2N+1)-column mode arrays. Used by the
/// pseudo-spectral products.
Eigen::MatrixXd synthesize_full(const Eigen::MatrixXcd& full, int theta_points);
Eigen::MatrixXcd project_full(const Eigen::MatrixXd& samples, int n_modes);

/// Smooth band-limited test field with an analytic physical form:
/// c_n(r) = sum_k a_{n,k} (r/2)^{n+2k} e^{-r^2/8} (n >= 0, real a_{0,k}),
/// optionally minus m G so that the mean vanishes.
struct BandLimitedField {
  int max_mode = 4;
  int radial_terms = 3;
  std::vector<std::vector<cplx>> coeffs;  // [n][k]
  double gaussian_shift = 0.0;            // m

  static BandLimitedField random(int max_mode, std::uint64_t seed, bool zero_mean = true,
                                 bool even_only = false);
  cplx coefficient(int n, double r) const;
  double value(double x1, double x2) const;
  ModeField sample(GridPtr grid) const;
};

}  // namespace burgers
