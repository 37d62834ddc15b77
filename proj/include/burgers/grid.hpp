#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>

#include "burgers/config.hpp"

namespace burgers {

/// Symmetry of a radial profile under r -> -r. A mode-n profile behaves
/// like r^|n| times an even function, so its parity is (-1)^n.
enum class Parity { Even, Odd };

inline Parity mode_parity(int n) { return (n % 2 == 0) ? Parity::Even : Parity::Odd; }
inline Parity flip(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }

/// How stencils that reach past r_max are closed.
///  - Zero: the profile vanishes beyond r_max (Gaussian-weighted fields).
///  - PowerDecay: f(r) = f(r_max) (r_max / r)^p beyond r_max, the exact
///    exterior behaviour of a mode-p streamfunction once the vorticity
///    has decayed.
struct OuterClosure {
  enum class Kind { Zero, PowerDecay };
  Kind kind = Kind::Zero;
  int exponent = 0;

  static OuterClosure zero() { return {}; }
  static OuterClosure decay(int p) { return {Kind::PowerDecay, p}; }
};

/// Staggered uniform radial grid r_j = (j + 1/2) h, j = 0..n_r-1, with the
/// last node at r_max. No node sits at the origin; stencils crossing r = 0
/// are folded back using the profile parity.
///
/// Differentiation uses centered 8th-order finite differences; integrals use
/// a composite rule built from the same 8-point local interpolants, which
/// gives cumulative integrals for free.
class RadialGrid {
 public:
  static constexpr int kHalfWidth = 4;  // stencil half-width (order 2*kHalfWidth)

  explicit RadialGrid(const SpectralConfig& config);

  const SpectralConfig& config() const { return config_; }
  int size() const { return static_cast<int>(r_.size()); }
  int n_modes() const { return config_.n_modes; }
  double r_max() const { return config_.r_max; }
  double spacing() const { return h_; }
  const Eigen::VectorXd& nodes() const { return r_; }

  /// Weights W_j with sum_j W_j p(r_j) ~ int_0^{r_max} p(r) r dr for even p.
  const Eigen::VectorXd& area_weights() const { return area_w_; }

  /// Weights w_j with sum_j w_j F(r_j) ~ int_0^{r_max} F(r) dr for odd F.
  const Eigen::VectorXd& line_weights() const { return line_w_; }

  /// First and second derivative matrices for profiles of the given parity.
  Eigen::SparseMatrix<double> d1(Parity p, OuterClosure c = OuterClosure::zero()) const;
  Eigen::SparseMatrix<double> d2(Parity p, OuterClosure c = OuterClosure::zero()) const;

  /// Cached zero-closure derivative matrices.
  const Eigen::SparseMatrix<double>& d1_zero(Parity p) const {
    return p == Parity::Even ? d1_even_ : d1_odd_;
  }
  const Eigen::SparseMatrix<double>& d2_zero(Parity p) const {
    return p == Parity::Even ? d2_even_ : d2_odd_;
  }

  /// Radial part of the mode-n Laplacian, d2 + (1/r) d1 - n^2/r^2.
  Eigen::SparseMatrix<double> laplacian(int n, OuterClosure c = OuterClosure::zero()) const;

  /// I_j = int_0^{r_j} F(r) dr for an odd integrand F vanishing beyond r_max.
  Eigen::VectorXd cumulative_from_origin(const Eigen::VectorXd& F) const;
  /// J_j = int_{r_j}^{r_max} F(r) dr for an odd integrand F.
  Eigen::VectorXd cumulative_to_outer(const Eigen::VectorXd& F) const;

  /// Number of theta samples used for dealiased products.
  int dealiased_theta_points() const;

  bool same_as(const RadialGrid& other) const;

 private:
  Eigen::SparseMatrix<double> build(const Eigen::VectorXd& centered, Parity p,
                                    OuterClosure c) const;

  SpectralConfig config_;
  double h_ = 0.0;
  Eigen::VectorXd r_;
  Eigen::VectorXd area_w_;
  Eigen::VectorXd line_w_;
  Eigen::VectorXd stencil_d1_;  // centered weights, offsets -K..K
  Eigen::VectorXd stencil_d2_;
  Eigen::VectorXd cell_w_;      // [r_j, r_{j+1}] from nodes j-K+1..j+K
  Eigen::VectorXd half_cell_w_; // [0, r_0] from nodes -K..K-1
  Eigen::SparseMatrix<double> d1_even_, d1_odd_, d2_even_, d2_odd_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr make_grid(const SpectralConfig& config) {
  return std::make_shared<const RadialGrid>(config);
}

/// Diagonal matrix in sparse storage.
template <typename Scalar>
Eigen::SparseMatrix<Scalar> sparse_diagonal(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& d) {
  Eigen::SparseMatrix<Scalar> m(d.size(), d.size());
  m.reserve(Eigen::VectorXi::Ones(d.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i) m.insert(i, i) = d(i);
  return m;
}

/// Finite-difference weights (Fornberg) for derivatives 0..max_order at z.
Eigen::MatrixXd fd_weights(double z, const Eigen::VectorXd& x, int max_order);

}  // namespace burgers
