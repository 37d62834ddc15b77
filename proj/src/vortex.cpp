#include "burgers/vortex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "burgers/errors.hpp"

namespace burgers {

namespace {

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw DomainError("asymmetry lambda must lie in [0, 1)");
}

// Mode-2 part of a field.
ModeField mode2_part(const ModeField& w) {
  ModeField out(w.grid_ptr());
  out.scaled().col(2) = w.scaled().col(2);
  return out;
}

}  // namespace

ModeField compute_w_alpha(const GridPtr& grid, double alpha) {
  if (alpha == 0.0) return ModeField(grid);
  const ResolventSolve rs(grid, alpha);
  return -alpha * rs.solve(mg_profile(grid));
}

double VortexSolution::max_contraction() const {
  double m = 0.0;
  for (double c : contraction_estimates) m = std::max(m, c);
  return m;
}

VortexProblem::VortexProblem(GridPtr grid, double alpha)
    : grid_(grid),
      alpha_(alpha),
      ops_(grid),
      resolvent_(grid, alpha),
      MG_(mg_profile(grid)),
      w_alpha_(-alpha * resolvent_.solve(MG_)) {}

ModeField VortexProblem::picard_map(double lambda, const ModeField& w) const {
  const ModeField vgw = advect(ops_.biot_savart().velocity(w), w);
  return lambda * w_alpha_ + resolvent_.solve(vgw - lambda * ops_.apply_M(w));
}

ModeField VortexProblem::stationary_residual(double lambda, const ModeField& w) const {
  ModeField res = ops_.apply_L_minus(alpha_, w);
  res += lambda * (alpha_ * MG_ + ops_.apply_M(w));
  res -= advect(ops_.biot_savart().velocity(w), w);
  return res;
}

VortexSolution VortexProblem::solve(double lambda, const PicardOptions& options) const {
  require_lambda(lambda);
  if (!(options.damping > 0.0 && options.damping <= 1.0))
    throw DomainError("damping must lie in (0, 1]");
  const SpectralConfig& cfg = grid_->config();
  const double scale = std::max(1.0, std::abs(alpha_));

  VortexSolution sol{alpha_, lambda, ModeField(grid_), ModeField(grid_)};
  ModeField w = options.initial ? *options.initial : lambda * w_alpha_;
  require_same_grid(*grid_, w.grid());

  double prev_step = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  for (int k = 1; k <= cfg.picard_max_iter; ++k) {
    const ModeField next = picard_map(lambda, w);
    ModeField step = next - w;
    step *= options.damping;
    w += step;
    const double s = norm_Y(step);
    if (!std::isfinite(s)) throw NumericError("Picard iterate is not finite");
    if (std::isfinite(prev_step) && prev_step > 0.0) sol.contraction_estimates.push_back(s / prev_step);
    prev_step = s;

    const double res = norm_X(stationary_residual(lambda, w)) / scale;
    sol.residual_history.push_back(res);
    sol.iterations = k;
    if (res <= cfg.picard_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("Picard iteration did not reach the residual tolerance",
                           sol.residual_history);

  sol.w = w;
  sol.omega = alpha_ * gaussian_profile(grid_) + w;
  sol.residual_X = sol.residual_history.back();
  sol.certified = lambda <= options.certified_lambda && sol.max_contraction() < 1.0;
  return sol;
}

VortexSolution picard_solve(const GridPtr& grid, double alpha, double lambda,
                            const PicardOptions& options) {
  require_lambda(lambda);
  return VortexProblem(grid, alpha).solve(lambda, options);
}

double min_sample(const ModeField& w, int theta_points) {
  return synthesize(w, theta_points).minCoeff();
}

double odd_mode_size(const ModeField& w) {
  double m = 0.0;
  for (int n = 1; n <= w.n_modes(); n += 2) m = std::max(m, w.scaled().col(n).cwiseAbs().maxCoeff());
  return m;
}

LambdaExpansionReport expansion_check_lambda(const GridPtr& grid, double alpha, double lambda) {
  require_lambda(lambda);
  const VortexProblem problem(grid, alpha);
  LambdaExpansionReport rep{alpha, lambda};
  auto d = [&](double l) {
    return norm_Y(problem.solve(l).w - l * problem.w_alpha());
  };
  rep.d_full = d(lambda);
  rep.d_half = d(lambda / 2.0);
  rep.ratio = rep.d_half > 0.0 ? rep.d_full / rep.d_half : std::numeric_limits<double>::quiet_NaN();
  rep.quadratic = rep.ratio >= 3.5 && rep.ratio <= 4.5;
  return rep;
}

LargeRReport large_R_check(const GridPtr& grid, double lambda, const std::vector<double>& alphas) {
  require_lambda(lambda);
  LargeRReport rep;
  rep.lambda = lambda;
  const ModeField w_inf = compute_w_infty(grid).field;
  for (double a : alphas) {
    if (!(std::abs(a) >= 1.0)) throw DomainError("large-R check needs |alpha| >= 1");
    const VortexSolution s = picard_solve(grid, a, lambda);
    LargeRRow row{a};
    row.deviation = norm_Y(s.w - lambda * w_inf) / std::abs(a);
    row.direction = lambda > 0.0 ? norm_Y(mode2_part(s.w) * (1.0 / lambda) - w_inf) : 0.0;
    rep.rows.push_back(row);
  }
  rep.deviation_decreasing = true;
  for (size_t i = 1; i < rep.rows.size(); ++i)
    if (!(rep.rows[i].deviation < rep.rows[i - 1].deviation)) rep.deviation_decreasing = false;
  if (!rep.rows.empty() && rep.rows.front().direction > 0.0)
    rep.direction_ratio = rep.rows.back().direction / rep.rows.front().direction;
  return rep;
}

SmallRReport small_R_check(const GridPtr& grid, double lambda, const std::vector<double>& alphas) {
  require_lambda(lambda);
  SmallRReport rep;
  rep.lambda = lambda;
  const ModeField Gl = g_lambda_profile(lambda, grid);
  const ModeField MG = mg_profile(grid);
  for (double a : alphas) {
    if (!(std::abs(a) <= 1.0)) throw DomainError("small-R check needs |alpha| <= 1");
    const VortexSolution s = picard_solve(grid, a, lambda);
    rep.rows.push_back({a, norm_Y(s.omega - a * Gl), norm_Y(s.w - (lambda * a) * MG)});
  }
  for (size_t i = 1; i < rep.rows.size(); ++i)
    rep.ratios.push_back(rep.rows[i - 1].deviation / rep.rows[i].deviation);
  return rep;
}

}  // namespace burgers
