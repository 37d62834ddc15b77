#include "burgers/winfty.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "burgers/errors.hpp"
#include "burgers/operators.hpp"

namespace burgers {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kPi = std::numbers::pi;
using State = std::array<double, 2>;

// r^2 h(r): the perturbation of the constant potential 4 in u = log r.
double strain_term(double r) {
  const double z = r * r / 4.0;
  return 4.0 * z * h_potential(r);
}

// h / g^{1/2} = sqrt(4 pi) (r^2/8) / sinh(r^2/8), stable for all r.
Eigen::VectorXd h_over_sqrt_gaussian(const RadialGrid& grid) {
  const Eigen::VectorXd& r = grid.nodes();
  Eigen::VectorXd out(r.size());
  for (Eigen::Index j = 0; j < r.size(); ++j) {
    const double q = r(j) * r(j) / 8.0;
    out(j) = std::sqrt(4.0 * kPi) * (q < 1e-8 ? 1.0 : q / std::sinh(q));
  }
  return out;
}

Eigen::VectorXd h_on_grid(const RadialGrid& grid) {
  return grid.nodes().unaryExpr([](double r) { return h_potential(r); });
}

}  // namespace

double h_potential(double r) {
  if (!(r >= 0.0)) throw DomainError("h_potential needs r >= 0");
  const double z = r * r / 4.0;
  if (z < 1e-8) return 1.0 - z / 2.0;
  return z / std::expm1(z);
}

HomogeneousSolutions solve_homogeneous(const GridPtr& grid, double tol) {
  const RadialGrid& g = *grid;
  const int n = g.size();
  const Eigen::VectorXd& r = g.nodes();
  HomogeneousSolutions hs;
  hs.grid = grid;
  hs.psi_plus.resize(n);
  hs.psi_minus.resize(n);
  hs.dpsi_plus.resize(n);
  hs.dpsi_minus.resize(n);

  auto stepper = odeint::make_controlled(1e-300, tol, odeint::runge_kutta_fehlberg78<State>());

  // psi_-: forward in u = log r from deep inside the r^2 regime.
  {
    auto rhs = [](const State& y, State& dy, double u) {
      dy[0] = y[1];
      dy[1] = (4.0 - strain_term(std::exp(u))) * y[0];
    };
    const double r_seed = std::min(1e-7, r(0) / 10.0);
    std::vector<double> times{std::log(r_seed)};
    for (int j = 0; j < n; ++j) times.push_back(std::log(r(j)));
    State y{r_seed * r_seed, 2.0 * r_seed * r_seed};
    int k = -1;
    auto obs = [&](const State& s, double) {
      if (k >= 0) {
        hs.psi_minus(k) = s[0];
        hs.dpsi_minus(k) = s[1] / r(k);
      }
      ++k;
    };
    hs.steps_minus = static_cast<int>(
        odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(), 1e-3, obs));
  }

  // psi_+: backward from where the potential perturbation is below 1e-14,
  // in v = -log r.
  {
    auto rhs = [](const State& y, State& dy, double v) {
      dy[0] = y[1];
      dy[1] = (4.0 - strain_term(std::exp(-v))) * y[0];
    };
    const double r_seed = std::max(g.r_max(), 13.0);
    std::vector<double> times;
    const bool extra = r_seed > r(n - 1);
    if (extra) times.push_back(-std::log(r_seed));
    for (int j = n - 1; j >= 0; --j) times.push_back(-std::log(r(j)));
    const double inv2 = 1.0 / (r_seed * r_seed);
    State y{inv2, 2.0 * inv2};  // d/dv = -d/du
    int k = extra ? -1 : 0;
    auto obs = [&](const State& s, double) {
      if (k >= 0) {
        const int j = n - 1 - k;
        hs.psi_plus(j) = s[0];
        hs.dpsi_plus(j) = -s[1] / r(j);
      }
      ++k;
    };
    hs.steps_plus = static_cast<int>(
        odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(), 1e-3, obs));
  }

  if (!hs.psi_plus.allFinite() || !hs.psi_minus.allFinite())
    throw NumericError("homogeneous integration produced non-finite values (steps " +
                       std::to_string(hs.steps_minus) + ", " + std::to_string(hs.steps_plus) + ")");

  hs.scaled_wronskian = r.cwiseProduct(hs.psi_plus.cwiseProduct(hs.dpsi_minus) -
                                       hs.dpsi_plus.cwiseProduct(hs.psi_minus));
  int j1 = 0;
  for (int j = 0; j < n; ++j)
    if (std::abs(r(j) - 1.0) < std::abs(r(j1) - 1.0)) j1 = j;
  hs.w0 = hs.scaled_wronskian(j1);
  if (!(hs.w0 > 0.0)) throw NumericError("Wronskian constant is not positive");
  return hs;
}

double HomogeneousSolutions::wronskian_variation(double r_lo, double r_hi) const {
  const Eigen::VectorXd& r = grid->nodes();
  double lo = INFINITY, hi = -INFINITY;
  for (Eigen::Index j = 0; j < r.size(); ++j) {
    if (r(j) < r_lo || r(j) > r_hi) continue;
    lo = std::min(lo, scaled_wronskian(j));
    hi = std::max(hi, scaled_wronskian(j));
  }
  return (hi - lo) / std::abs(w0);
}

Eigen::VectorXcd HomogeneousSolutions::green(const Eigen::VectorXcd& S) const {
  const RadialGrid& g = *grid;
  const Eigen::VectorXd& r = g.nodes();
  auto solve_real = [&](const Eigen::VectorXd& s) -> Eigen::VectorXd {
    const Eigen::VectorXd inner = g.cumulative_from_origin(psi_minus.cwiseProduct(s).cwiseProduct(r));
    const Eigen::VectorXd outer = g.cumulative_to_outer(psi_plus.cwiseProduct(s).cwiseProduct(r));
    return (psi_plus.cwiseProduct(inner) + psi_minus.cwiseProduct(outer)) / w0;
  };
  Eigen::VectorXcd out(S.size());
  out.real() = solve_real(S.real());
  out.imag() = solve_real(S.imag());
  return out;
}

Eigen::VectorXd solve_mode2_bvp(const RadialGrid& grid, const Eigen::VectorXd& S) {
  Eigen::SparseMatrix<double> A = -grid.laplacian(2, OuterClosure::decay(2));
  A -= sparse_diagonal<double>(h_on_grid(grid));
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
  if (lu.info() != Eigen::Success) throw NumericError("mode-2 boundary-value factorization failed");
  return lu.solve(S);
}

// Lambda on mode 2: (Lambda w)_2 = 2i (phi c - (g/2) psi) with -Delta_2 psi = c.
// Writing b for the target coefficient and b~ = b / (2i):
//   -Delta_2 psi - h psi = b~ / phi,   c = b~ / phi + h psi.

ModeField Mode2Inversion::field() const {
  ModeField w(grid);
  const Eigen::VectorXd f = omega.cwiseQuotient(sqrt_gaussian(*grid));
  const cplx factor = (phase == Phase::Cos) ? cplx(0.0, -0.5) : cplx(-0.5, 0.0);
  w.scaled().col(2) = factor * f.cast<cplx>();
  return w;
}

Mode2Inversion invert_lambda_mode2(const HomogeneousSolutions& hs, const Eigen::VectorXd& R,
                                   Phase phase) {
  const RadialGrid& g = *hs.grid;
  if (R.size() != g.size()) throw UsageError("profile length does not match the grid");
  const Eigen::VectorXd source = R.cwiseQuotient(2.0 * swirl_rate(g));
  Mode2Inversion out;
  out.grid = hs.grid;
  out.phase = phase;
  out.Omega = hs.green(source.cast<cplx>()).real();
  out.omega = source + h_on_grid(g).cwiseProduct(out.Omega);
  return out;
}

ModeField invert_lambda_mode2(const HomogeneousSolutions& hs, const ModeField& rhs) {
  require_same_grid(*hs.grid, rhs.grid());
  const RadialGrid& g = *hs.grid;
  const double size = rhs.scaled().cwiseAbs().maxCoeff();
  for (int n = 0; n <= rhs.n_modes(); ++n)
    if (n != 2 && rhs.scaled().col(n).cwiseAbs().maxCoeff() > 1e-12 * size)
      throw DomainError("mode-2 inversion needs a pure mode-2 right-hand side");
  const Eigen::VectorXd s = sqrt_gaussian(g);
  const Eigen::VectorXcd phi = swirl_rate(g).cast<cplx>();
  const Eigen::VectorXcd bt_f = rhs.scaled().col(2) / cplx(0.0, 2.0);  // b~ / g^{1/2}
  const Eigen::VectorXcd source = s.cast<cplx>().cwiseProduct(bt_f).cwiseQuotient(phi);
  const Eigen::VectorXcd psi = hs.green(source);
  ModeField out(hs.grid);
  out.scaled().col(2) =
      bt_f.cwiseQuotient(phi) + h_over_sqrt_gaussian(g).cast<cplx>().cwiseProduct(psi);
  return out;
}

WInfty compute_w_infty(const GridPtr& grid, const FitWindows& windows) {
  const RadialGrid& g = *grid;
  const Eigen::VectorXd& r = g.nodes();
  const int n = g.size();
  WInftyProfile p;
  p.homogeneous = solve_homogeneous(grid);
  const HomogeneousSolutions& hs = p.homogeneous;

  // M G = -(r^2/4) g cos 2theta.
  const Eigen::VectorXd R =
      r.unaryExpr([](double x) { return -x * x / 4.0 * std::exp(-x * x / 4.0) / (4.0 * kPi); });
  const Mode2Inversion inv = invert_lambda_mode2(hs, R, Phase::Cos);
  p.Omega = inv.Omega;
  p.omega = inv.omega;

  // Omega / r^2 = a + b r^2 + c r^4 near the origin.
  {
    std::vector<int> idx;
    for (int j = 0; j < n && r(j) <= windows.inner_max; ++j) idx.push_back(j);
    if (idx.size() < 4) throw NumericError("too few nodes in the inner fit window");
    Eigen::MatrixXd A(idx.size(), 3);
    Eigen::VectorXd b(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) {
      const double x = r(idx[i]) * r(idx[i]);
      A.row(i) << 1.0, x, x * x;
      b(i) = p.Omega(idx[i]) / x;
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    p.Omega_plus = c(0);
    p.fit_residual_plus = (A * c - b).cwiseAbs().maxCoeff() / std::abs(c(0));
  }
  // r^2 Omega = const far out.
  {
    std::vector<double> vals;
    for (int j = 0; j < n; ++j)
      if (r(j) >= windows.outer_lo * g.r_max() && r(j) <= windows.outer_hi * g.r_max())
        vals.push_back(r(j) * r(j) * p.Omega(j));
    if (vals.size() < 2) throw NumericError("too few nodes in the outer fit window");
    double m = 0.0;
    for (double v : vals) m += v;
    m /= double(vals.size());
    double dev = 0.0;
    for (double v : vals) dev = std::max(dev, std::abs(v - m));
    p.Omega_minus = m;
    p.fit_residual_minus = dev / std::abs(m);
  }
  // Closed-form coefficients -int z^3 psi_+- h / (4 w0).
  {
    const Eigen::VectorXd zh = r.array().cube().matrix().cwiseProduct(h_on_grid(g)) / (4.0 * hs.w0);
    p.Omega_plus_integral = -g.line_weights().dot(zh.cwiseProduct(hs.psi_plus));
    p.Omega_minus_integral = -g.line_weights().dot(zh.cwiseProduct(hs.psi_minus));
  }

  WInfty out{p, inv.field()};
  const LinearOperators ops(grid);
  const ModeField MG = mg_profile(grid);
  out.profile.residual = norm_X(ops.apply_Lambda(out.field) - MG) / norm_X(MG);
  return out;
}

ModeField compute_z_infty(const HomogeneousSolutions& hs, const ModeField& w_infty) {
  return invert_lambda_mode2(hs, apply_L(w_infty));
}

double log_slope(const RadialGrid& grid, const Eigen::VectorXd& Omega, int j) {
  const Eigen::VectorXd& r = grid.nodes();
  const int a = std::max(j - 1, 0), b = std::min(j + 1, grid.size() - 1);
  return (std::log(std::abs(Omega(b))) - std::log(std::abs(Omega(a)))) /
         (std::log(r(b)) - std::log(r(a)));
}

Eigen::VectorXd taylor_fit(const RadialGrid& grid, const Eigen::VectorXd& profile, double r_fit,
                           int degree) {
  const Eigen::VectorXd& r = grid.nodes();
  std::vector<int> idx;
  for (int j = 0; j < grid.size() && r(j) <= r_fit; ++j) idx.push_back(j);
  if (static_cast<int>(idx.size()) <= degree) throw DomainError("fit window holds too few nodes");
  Eigen::MatrixXd A(idx.size(), degree + 1);
  Eigen::VectorXd b(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    const double x = r(idx[i]) / r_fit;
    for (int p = 0; p <= degree; ++p) A(i, p) = std::pow(x, p);
    b(i) = profile(idx[i]);
  }
  return A.colPivHouseholderQr().solve(b);
}

}  // namespace burgers
