#pragma once

#include <Eigen/SparseLU>
#include <memory>
#include <vector>

#include "burgers/biot_savart.hpp"
#include "burgers/mode_field.hpp"

namespace burgers {

/// phi(r) = (1 - e^{-r^2/4}) / (2 pi r^2): angular velocity of the Burgers swirl.
Eigen::VectorXd swirl_rate(const RadialGrid& grid);

/// Rescaled mode-n form of the drift-diffusion operator,
/// d2 + d1/r - n^2/r^2 - r^2/16 + 1/2 acting on f = G^{-1/2} w_n.
Eigen::SparseMatrix<double> drift_matrix(const RadialGrid& grid, int n);

/// The linear operators of the vortex problem with their factorizations
/// cached. Immutable after construction.
class LinearOperators {
 public:
  explicit LinearOperators(GridPtr grid);

  const GridPtr& grid_ptr() const { return grid_; }
  const BiotSavart& biot_savart() const { return bs_; }
  const Eigen::SparseMatrix<double>& drift(int n) const { return drift_[n]; }
  const Eigen::VectorXd& phi() const { return phi_; }

  ModeField apply_L(const ModeField& w) const;
  ModeField apply_M(const ModeField& w) const;
  ModeField apply_Lambda(const ModeField& w) const;
  /// Same as apply_Lambda without the zero-mean precondition (mode 0 of
  /// the output is zero regardless).
  ModeField apply_Lambda_unchecked(const ModeField& w) const;
  /// (L - alpha Lambda) w.
  ModeField apply_L_minus(double alpha, const ModeField& w) const;

 private:
  GridPtr grid_;
  BiotSavart bs_;
  std::vector<Eigen::SparseMatrix<double>> drift_;
  Eigen::VectorXd phi_;
  Eigen::VectorXd s_;
};

/// Mode-by-mode factorization of  a I + b (L - alpha Lambda).
///
/// Each mode n >= 1 is a coupled (f_n, psi_n) block system so the nonlocal
/// part of Lambda is treated exactly. For a = 0 mode 0 is solved on the
/// zero-mean subspace through a bordered system.
class ResolventSolve {
 public:
  /// (L - alpha Lambda)^{-1}.
  ResolventSolve(GridPtr grid, double alpha);
  /// (I - tau (L - alpha Lambda))^{-1}, the implicit stage of a time step.
  static ResolventSolve implicit_step(GridPtr grid, double alpha, double tau);

  double alpha() const { return alpha_; }
  ModeField solve(const ModeField& rhs) const;

 private:
  ResolventSolve(GridPtr grid, double alpha, double a, double b);

  GridPtr grid_;
  double alpha_, a_, b_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> mode0_;
  std::vector<std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<cplx>>>> modes_;
};

ModeField apply_L(const ModeField& w);
ModeField apply_M(const ModeField& w);
ModeField apply_Lambda(const ModeField& w);
ModeField solve_resolvent(double alpha, const ModeField& rhs);

struct Eigenvalue {
  double value;
  int multiplicity;
};

/// The k smallest eigenvalues of -L on zero-mean fields, ascending, with
/// repetitions. Each mode is handled by shift-invert Arnoldi.
std::vector<double> spectrum_L(const GridPtr& grid, int k);
/// Collapse a sorted list into (value, multiplicity) clusters.
std::vector<Eigenvalue> group_eigenvalues(const std::vector<double>& sorted, double tol);

}  // namespace burgers
