#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "burgers/errors.hpp"
#include "burgers/operators.hpp"
#include "burgers/winfty.hpp"
#include "oracles.hpp"

using namespace burgers;

namespace {

GridPtr default_grid() {
  static GridPtr g = make_grid(SpectralConfig{});
  return g;
}

const WInfty& w_infty() {
  static WInfty w = compute_w_infty(default_grid());
  return w;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// -(r^2/4) g(r): the cos 2theta amplitude of M G.
Eigen::VectorXd strain_source(const RadialGrid& g) {
  return g.nodes().unaryExpr(
      [](double r) { return -r * r / 4.0 * std::exp(-r * r / 4.0) / (4.0 * oracle::pi); });
}

}  // namespace

TEST_CASE("potential h") {
  CHECK(h_potential(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h_potential(1e-6) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h_potential(2.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-14));
  CHECK(h_potential(2.0) == doctest::Approx(0.581977).epsilon(1e-6));
  CHECK_THROWS_AS(h_potential(-1.0), DomainError);

  // 4/r^2 - h > 0, i.e. 1/z - z/(e^z - 1) > 0 for z = r^2/4 in (0, 64].
  double worst = INFINITY;
  for (int k = 1; k <= 64000; ++k) {
    const double z = k * 1e-3;
    const double r = 2.0 * std::sqrt(z);
    worst = std::min(worst, 1.0 / z - z / std::expm1(z));
    CHECK_MESSAGE(4.0 / (r * r) - h_potential(r) > 0.0, "r = " << r);
  }
  CHECK(worst > 0.0);
}

TEST_CASE("homogeneous solutions: normalization, Wronskian, monotonicity") {
  auto g = default_grid();
  const auto& hs = w_infty().profile.homogeneous;
  const Eigen::VectorXd& r = g->nodes();
  const int n = g->size();

  // psi_- = r^2 (1 - r^2/12 + ...) at the origin, psi_+ = r^{-2} at the seed.
  CHECK(std::abs(hs.psi_minus(0) / (r(0) * r(0)) - 1.0) < 1e-4);
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(hs.psi_minus(j) / (r(j) * r(j)) - (1.0 - r(j) * r(j) / 12.0)) < 1e-6);
  CHECK(std::abs(r(n - 1) * r(n - 1) * hs.psi_plus(n - 1) - 1.0) < 1e-4);

  CHECK(hs.w0 > 0.0);
  CHECK(hs.wronskian_variation() < 1e-6);
  auto node_near = [&](double x) { return int(std::lround(x / g->spacing() - 0.5)); };
  const double w1 = hs.scaled_wronskian(node_near(1.0)), w5 = hs.scaled_wronskian(node_near(5.0));
  CHECK(std::abs(w1 - w5) / w1 < 1e-6);

  // Dual asymptotics.
  CHECK(std::abs(4.0 * r(0) * r(0) * hs.psi_plus(0) / hs.w0 - 1.0) < 1e-2);
  CHECK(std::abs(4.0 * hs.psi_minus(n - 1) / (r(n - 1) * r(n - 1) * hs.w0) - 1.0) < 1e-2);

  for (int j = 0; j < n; ++j) {
    CHECK(hs.dpsi_minus(j) > 0.0);
    CHECK(hs.dpsi_plus(j) < 0.0);
  }
}

TEST_CASE("mode-2 inversion: zero rhs, BVP oracle, residual") {
  auto g = default_grid();
  const auto& hs = w_infty().profile.homogeneous;

  const auto zero = invert_lambda_mode2(hs, Eigen::VectorXd::Zero(g->size()), Phase::Cos);
  CHECK(zero.Omega.cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero.omega.cwiseAbs().maxCoeff() == 0.0);

  // Green-function quadrature against a direct banded solve.
  const Eigen::VectorXd R = strain_source(*g);
  const Eigen::VectorXd S = R.cwiseQuotient(2.0 * swirl_rate(*g));
  const Eigen::VectorXd bvp = solve_mode2_bvp(*g, S);
  const auto inv = invert_lambda_mode2(hs, R, Phase::Cos);
  CHECK((bvp - inv.Omega).cwiseAbs().maxCoeff() < 1e-7 * inv.Omega.cwiseAbs().maxCoeff());

  // A different, non-Gaussian rhs in both phases.
  const Eigen::VectorXd r = g->nodes();
  const Eigen::VectorXd Q = r.unaryExpr([](double x) { return x * x * (1.0 - x) * std::exp(-x * x / 3.0); });
  const LinearOperators ops(g);
  for (Phase ph : {Phase::Cos, Phase::Sin}) {
    const ModeField w = invert_lambda_mode2(hs, Q, ph).field();
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(g->size(), g->n_modes() + 1);
    // R cos 2theta -> c_2 = R/2;  R sin 2theta -> c_2 = R/(2i).
    c.col(2) = (ph == Phase::Cos ? cplx(0.5, 0.0) : cplx(0.0, -0.5)) * Q.cast<cplx>();
    const ModeField target = ModeField::from_physical(g, c);
    CHECK(norm_X(ops.apply_Lambda(w) - target) / norm_X(target) < 1e-6);
  }

  // The field-level inversion handles an arbitrary phase.
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(g->size(), g->n_modes() + 1);
  c.col(2) = cplx(0.3, -0.8) * Q.cast<cplx>();
  const ModeField rhs = ModeField::from_physical(g, c);
  const ModeField sol = invert_lambda_mode2(hs, rhs);
  CHECK(norm_X(ops.apply_Lambda(sol) - rhs) / norm_X(rhs) < 1e-6);

  c.col(3) = Q.cast<cplx>();
  CHECK_THROWS_AS(invert_lambda_mode2(hs, ModeField::from_physical(g, c)), DomainError);
}

TEST_CASE("w_infty: asymptotic coefficients and defining residual") {
  auto g = default_grid();
  const auto& p = w_infty().profile;
  MESSAGE("Omega_+ = " << p.Omega_plus << ", Omega_- = " << p.Omega_minus << ", w0 = " << p.w0());
  CHECK(std::abs(p.Omega_plus + 0.38) < 0.02);
  CHECK(std::abs(p.Omega_minus + 17.5) < 0.3);
  CHECK(p.fit_residual_plus < 1e-4);
  CHECK(p.fit_residual_minus < 1e-4);
  // Fitted and closed-form coefficients agree.
  CHECK(std::abs(p.Omega_plus - p.Omega_plus_integral) < 1e-6);
  CHECK(std::abs(p.Omega_minus - p.Omega_minus_integral) < 1e-6);

  CHECK(p.residual < 1e-6);
  const ModeField MG = mg_profile(g);
  CHECK(norm_X(apply_Lambda(w_infty().field) - MG) / norm_X(MG) < 1e-6);

  const int n = g->size();
  const double R = g->r_max();
  CHECK(std::abs(p.Omega(n - 1) * R * R / p.Omega_minus - 1.0) < 1e-2);
  CHECK(std::abs(log_slope(*g, p.Omega, 1) - 2.0) < 0.01);
  CHECK(std::abs(log_slope(*g, p.Omega, n - 2) + 2.0) < 0.05);
}

TEST_CASE("w_infty: sign and even Taylor structure of the vorticity") {
  auto g = default_grid();
  const auto& p = w_infty().profile;
  for (int j = 0; j < g->size(); ++j) CHECK(p.omega(j) < 0.0);
  // omega vanishes at the origin like r^2.
  const double r0 = g->nodes()(0);
  CHECK(std::abs(p.omega(0)) < 1.0 * r0 * r0);

  const Eigen::VectorXd c = taylor_fit(*g, p.omega);
  double odd = 0.0, even = 0.0;
  for (int k = 0; k < c.size(); ++k) (k % 2 ? odd : even) = std::max(k % 2 ? odd : even, std::abs(c(k)));
  MESSAGE("Taylor odd/even ratio " << odd / even);
  CHECK(odd < 1e-6 * even);
  CHECK(std::abs(c(0)) < 1e-6 * even);
}

TEST_CASE("phase bookkeeping and z_infty") {
  auto g = default_grid();
  const ModeField& w = w_infty().field;
  const ModeField MG = mg_profile(g);

  // M G ~ cos 2theta: real coefficient; w_infty ~ sin 2theta: imaginary.
  CHECK(max_abs(MG.physical_mode(2).imag().cast<cplx>()) == 0.0);
  CHECK(max_abs(w.physical_mode(2).real().cast<cplx>()) == 0.0);
  CHECK(max_abs(w.physical_mode(2)) > 0.0);
  const ModeField Lw = apply_L(w);
  CHECK(max_abs(Lw.physical_mode(2).real().cast<cplx>()) == 0.0);

  // Direct check in physical space: w(r, pi/4) = omega(r), w(r, 0) = 0.
  const auto& p = w_infty().profile;
  const int j = 40;
  CHECK(w.value_at_node(j, oracle::pi / 4) == doctest::Approx(p.omega(j)).epsilon(1e-12));
  CHECK(std::abs(w.value_at_node(j, 0.0)) < 1e-14);

  const ModeField z = compute_z_infty(p.homogeneous, w);
  for (int n = 0; n <= g->n_modes(); ++n)
    if (n != 2) CHECK(max_abs(z.scaled().col(n)) == 0.0);
  // z_infty ~ cos 2theta.
  CHECK(max_abs(z.physical_mode(2).imag().cast<cplx>()) < 1e-12 * max_abs(z.physical_mode(2)));
  CHECK(norm_X(apply_Lambda(z) - Lw) / norm_X(Lw) < 1e-6);
}

TEST_CASE("w_infty under grid refinement") {
  SpectralConfig c;
  c.n_r = 1024;
  auto g = make_grid(c);
  const WInfty fine = compute_w_infty(g);
  CHECK(fine.profile.residual < 1e-7);
  CHECK(std::abs(fine.profile.Omega_plus - w_infty().profile.Omega_plus) < 1e-6);
  CHECK(std::abs(fine.profile.Omega_minus - w_infty().profile.Omega_minus) < 1e-6);
  CHECK(std::abs(fine.profile.w0() - w_infty().profile.w0()) < 1e-6);
}
