#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "burgers/biot_savart.hpp"
#include "burgers/errors.hpp"
#include "oracles.hpp"

using namespace burgers;

namespace {

GridPtr default_grid() {
  static GridPtr g = make_grid(SpectralConfig{});
  return g;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("velocity of the Gaussian is the Burgers swirl") {
  auto g = default_grid();
  const VelocityField v = velocity_from_vorticity(gaussian_profile(g));
  const VelocityField vG = vG_profile(g);
  CHECK(max_abs(v.azimuthal - vG.azimuthal) < 1e-9);
  CHECK(max_abs(v.radial) == 0.0);
  int j = 0;
  while (g->nodes()(j) < 2.0) ++j;
  const double r = g->nodes()(j);
  CHECK(vG.azimuthal(j, 0).real() ==
        doctest::Approx((1.0 - std::exp(-r * r / 4)) / (2 * oracle::pi * r)).epsilon(1e-14));

  const VelocityField zero = velocity_from_vorticity(ModeField(g));
  CHECK(max_abs(zero.radial) == 0.0);
  CHECK(max_abs(zero.azimuthal) == 0.0);
}

TEST_CASE("manufactured mode-2 streamfunction") {
  auto g = default_grid();
  const Eigen::ArrayXd r = g->nodes().array();
  const Eigen::ArrayXd e = (-r.square() / 2.0).exp();
  const Eigen::VectorXd psi = (r.square() * e).matrix();
  const Eigen::VectorXd w2 = ((6.0 * r.square() - r.pow(4)) * e).matrix();
  const Eigen::VectorXcd got = streamfunction_mode(g, 2, w2.cast<cplx>());
  CHECK(max_abs(got - psi.cast<cplx>()) < 1e-8);
  CHECK(max_abs(streamfunction_mode(g, 3, Eigen::VectorXcd::Zero(g->size()))) == 0.0);
  CHECK_THROWS_AS(streamfunction_mode(g, 0, w2.cast<cplx>()), DomainError);
}

TEST_CASE("sin 2theta vorticity gives the (2/r) Omega cos 2theta, -Omega' sin 2theta velocity") {
  auto g = default_grid();
  const Eigen::ArrayXd r = g->nodes().array();
  const Eigen::ArrayXd e = (-r.square() / 2.0).exp();
  const Eigen::ArrayXd Omega = r.square() * e;
  const Eigen::ArrayXd dOmega = (2.0 * r - r.cube()) * e;
  const Eigen::ArrayXd omega = (6.0 * r.square() - r.pow(4)) * e;

  // omega(r) sin 2theta  ->  c_2 = omega / (2i)
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(g->size(), g->n_modes() + 1);
  c.col(2) = (omega.matrix() / 2.0).cast<cplx>() * cplx(0.0, -1.0);
  const VelocityField v = velocity_from_vorticity(ModeField::from_physical(g, c));

  // 2 Re(v_{r,2} e^{2i theta}) = (2/r) Omega cos 2theta,
  // 2 Re(v_{theta,2} e^{2i theta}) = -Omega' sin 2theta.
  const Eigen::VectorXcd vr_expect = (Omega / r).matrix().cast<cplx>();
  const Eigen::VectorXcd vt_expect = (dOmega / 2.0).matrix().cast<cplx>() * cplx(0.0, 1.0);
  CHECK(max_abs(v.radial.col(2) - vr_expect) < 1e-8);
  CHECK(max_abs(v.azimuthal.col(2) - vt_expect) < 1e-8);
}

TEST_CASE("curl round trip and divergence for random fields") {
  auto g = default_grid();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ModeField w = BandLimitedField::random(4, seed).sample(g);
    const VelocityField v = velocity_from_vorticity(w);
    const double scale = max_abs(w.physical());
    CHECK(max_abs(curl(v) - w.physical()) < 1e-7 * scale);
    const double vscale = std::max(max_abs(v.radial), max_abs(v.azimuthal));
    CHECK(max_abs(divergence(v)) < 1e-8 * vscale);
    CHECK(max_abs(v.radial.col(0)) == 0.0);
  }
  // Nonzero circulation as well.
  const ModeField w = BandLimitedField::random(4, 9, false).sample(g);
  const VelocityField v = velocity_from_vorticity(w);
  CHECK(max_abs(curl(v) - w.physical()) < 1e-7 * max_abs(w.physical()));
}

TEST_CASE("advection") {
  auto g = default_grid();
  const ModeField G = gaussian_profile(g);
  CHECK(norm_X(advect(vG_profile(g), G)) < 1e-10);

  const ModeField MG = mg_profile(g);
  const ModeField self = advect(velocity_from_vorticity(MG), MG);
  CHECK(std::abs(mean(self)) < 1e-10);
  for (int n = 0; n <= g->n_modes(); ++n) {
    if (n == 0 || n == 4) continue;
    CHECK(max_abs(self.scaled().col(n)) < 1e-12 * max_abs(self.scaled()));
  }
  CHECK(max_abs(self.scaled().col(4)) > 0.0);

  CHECK_THROWS_AS(advect(vG_profile(make_grid(SpectralConfig{8.0, 256, 8})), G), UsageError);
}

TEST_CASE("dealiasing is converged for |n| <= 4 products") {
  auto g = default_grid();
  const ModeField a = BandLimitedField::random(4, 21).sample(g);
  const ModeField b = BandLimitedField::random(4, 22).sample(g);
  const VelocityField v = velocity_from_vorticity(a);
  const ModeField p1 = advect(v, b);
  const ModeField p2 = advect(v, b, 2 * g->dealiased_theta_points());
  CHECK(norm_X(p1 - p2) < 1e-10 * std::max(1.0, norm_X(p1)));
  CHECK(std::abs(mean(p1)) < 1e-10 * std::max(1.0, norm_X(p1)));
}

TEST_CASE("bilinear estimate: |v.grad w~|_X / (|w|_Y |w~|_Y) stays bounded") {
  auto g = default_grid();
  BiotSavart bs(g);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const ModeField w = BandLimitedField::random(4, 1000 + 2 * k).sample(g);
    const ModeField wt = BandLimitedField::random(4, 1001 + 2 * k).sample(g);
    const double ratio = norm_X(advect(bs.velocity(w), wt)) / (norm_Y(w) * norm_Y(wt));
    REQUIRE(std::isfinite(ratio));
    worst = std::max(worst, ratio);
  }
  MESSAGE("bilinear constant estimate " << worst);
  CHECK(worst < 1.0);
}
