#pragma once

#include <optional>
#include <vector>

#include "burgers/operators.hpp"
#include "burgers/winfty.hpp"

namespace burgers {

/// w_alpha = -alpha (L - alpha Lambda)^{-1} M G, the first-order response
/// of the Burgers vortex alpha G to the strain asymmetry.
ModeField compute_w_alpha(const GridPtr& grid, double alpha);

struct PicardOptions {
  /// Update w <- (1 - damping) w + damping F(w); 1 is plain Picard.
  double damping = 1.0;
  /// Starting point; lambda w_alpha when empty.
  std::optional<ModeField> initial;
  /// Ceiling of the certified asymmetry range.
  double certified_lambda = 0.2;
};

struct VortexSolution {
  double alpha = 0.0, lambda = 0.0;
  ModeField w;      // correction to alpha G
  ModeField omega;  // alpha G + w
  /// |stationary residual|_X / max(1, |alpha|).
  double residual_X = 0.0;
  int iterations = 0;
  std::vector<double> contraction_estimates;  // |dw_k|_Y / |dw_{k-1}|_Y
  std::vector<double> residual_history;
  bool certified = false;

  double norm_Y() const { return burgers::norm_Y(w); }
  double max_contraction() const;
};

/// Fixed point of the stationary problem for one circulation. Holds the
/// factorized resolvent so several asymmetries can share it.
class VortexProblem {
 public:
  VortexProblem(GridPtr grid, double alpha);

  double alpha() const { return alpha_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const LinearOperators& operators() const { return ops_; }
  const ModeField& w_alpha() const { return w_alpha_; }

  /// One application of the Picard map w -> lambda w_alpha + R (v.grad w - lambda M w).
  ModeField picard_map(double lambda, const ModeField& w) const;
  /// L w + lambda M (alpha G + w) - alpha Lambda w - v.grad w.
  ModeField stationary_residual(double lambda, const ModeField& w) const;

  VortexSolution solve(double lambda, const PicardOptions& options = {}) const;

 private:
  GridPtr grid_;
  double alpha_;
  LinearOperators ops_;
  ResolventSolve resolvent_;
  ModeField MG_;
  ModeField w_alpha_;
};

VortexSolution picard_solve(const GridPtr& grid, double alpha, double lambda,
                            const PicardOptions& options = {});

/// Smallest value of a field over the polar sample grid.
double min_sample(const ModeField& w, int theta_points = 64);
/// Largest |scaled coefficient| among the odd modes.
double odd_mode_size(const ModeField& w);

struct LambdaExpansionReport {
  double alpha = 0.0, lambda = 0.0;
  double d_full = 0.0, d_half = 0.0;  // |w^{alpha,l} - l w_alpha|_Y at l = lambda, lambda/2
  double ratio = 0.0;                 // d_full / d_half, NaN when both vanish
  bool quadratic = false;             // ratio in [3.5, 4.5]
};

LambdaExpansionReport expansion_check_lambda(const GridPtr& grid, double alpha, double lambda);

struct LargeRRow {
  double alpha = 0.0;
  double deviation = 0.0;  // |omega/alpha - G - (lambda/alpha) w_infty|_Y
  double direction = 0.0;  // |P_2 w / lambda - w_infty|_Y
};

struct LargeRReport {
  double lambda = 0.0;
  std::vector<LargeRRow> rows;
  bool deviation_decreasing = false;
  double direction_ratio = 0.0;  // last / first direction entry
};

/// Alphas must satisfy |alpha| >= 1.
LargeRReport large_R_check(const GridPtr& grid, double lambda, const std::vector<double>& alphas);

struct SmallRRow {
  double alpha = 0.0;
  double deviation = 0.0;    // |omega - alpha G_lambda|_Y
  double first_order = 0.0;  // |w - lambda alpha M G|_Y
};

struct SmallRReport {
  double lambda = 0.0;
  std::vector<SmallRRow> rows;
  std::vector<double> ratios;  // deviation(alpha_k) / deviation(alpha_{k+1})
};

/// Alphas must satisfy |alpha| <= 1.
SmallRReport small_R_check(const GridPtr& grid, double lambda, const std::vector<double>& alphas);

}  // namespace burgers
