#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "burgers/errors.hpp"
#include "burgers/vortex.hpp"

using namespace burgers;

namespace {

GridPtr default_grid() {
  static GridPtr g = make_grid(SpectralConfig{});
  return g;
}

const VortexProblem& problem(double alpha) {
  static std::map<double, VortexProblem> cache;
  auto it = cache.find(alpha);
  if (it == cache.end()) it = cache.emplace(alpha, VortexProblem(default_grid(), alpha)).first;
  return it->second;
}

// Stationary residual assembled from the free operator functions only.
double independent_residual(const VortexSolution& s) {
  const ModeField& w = s.w;
  const ModeField res = apply_L(w) + s.lambda * apply_M(s.omega) - s.alpha * apply_Lambda(w) -
                  advect(velocity_from_vorticity(w), w);
  return norm_X(res) / std::max(1.0, std::abs(s.alpha));
}

ModeField only_mode(const ModeField& w, int n) {
  ModeField out(w.grid_ptr());
  out.scaled().col(n) = w.scaled().col(n);
  return out;
}

}  // namespace

TEST_CASE("first-order response w_alpha") {
  auto g = default_grid();
  CHECK(norm_X(compute_w_alpha(g, 0.0)) == 0.0);

  const ModeField MG = mg_profile(g);
  const ModeField small = compute_w_alpha(g, 1e-3);
  CHECK(norm_Y(small * 1e3 - MG) < 1e-2 * norm_Y(MG));
  CHECK(std::abs(mean(small)) < 1e-15);
  CHECK(norm_X(small - only_mode(small, 2)) == 0.0);

  // |w_alpha|_Y (1 + alpha) / alpha stays bounded; its two ends are
  // |M G|_Y (alpha -> 0) and |w_infty|_Y (alpha -> infinity).
  const ModeField w_inf = compute_w_infty(g).field;
  const double bound = 2.0 * std::max(norm_Y(MG), norm_Y(w_inf));
  for (double a : {1e-3, 0.1, 1.0, 10.0, 100.0, 1e3, 1e4}) {
    const double C = norm_Y(compute_w_alpha(g, a)) * (1.0 + a) / a;
    CHECK_MESSAGE(C < bound, "alpha " << a << " C " << C);
  }
  // The small-alpha limit holds for either sign of the circulation.
  CHECK(norm_Y(compute_w_alpha(g, -1e-3) * -1e3 - MG) < 1e-2 * norm_Y(MG));

  // |w_alpha - w_infty|_Y ~ K / alpha once alpha phi(r) dominates where
  // w_infty lives (r ~ 4, phi ~ 1/100): the 1/alpha law is checked there.
  const double d1 = norm_Y(compute_w_alpha(g, 1000.0) - w_inf);
  const double d4 = norm_Y(compute_w_alpha(g, 4000.0) - w_inf);
  MESSAGE("w_alpha -> w_infty decay factor 1000 -> 4000: " << d1 / d4);
  CHECK(std::abs(d1 / d4 - 4.0) < 1.0);
  const double d20 = norm_Y(compute_w_alpha(g, 20.0) - w_inf);
  const double d80 = norm_Y(compute_w_alpha(g, 80.0) - w_inf);
  MESSAGE("w_alpha -> w_infty decay factor 20 -> 80: " << d20 / d80);
  CHECK(d80 < d20);
}

TEST_CASE("trivial fixed points") {
  auto g = default_grid();
  const VortexSolution burgers = picard_solve(g, 10.0, 0.0);
  CHECK(burgers.iterations == 1);
  CHECK(norm_X(burgers.w) == 0.0);
  CHECK(norm_X(burgers.omega - 10.0 * gaussian_profile(g)) == 0.0);

  const VortexSolution still = picard_solve(g, 0.0, 0.1);
  CHECK(norm_X(still.w) == 0.0);
  CHECK(norm_X(still.omega) == 0.0);
}

TEST_CASE("Picard solve at alpha = 10, lambda = 0.05") {
  const VortexSolution s = problem(10.0).solve(0.05);
  CHECK(s.residual_X < 1e-10);
  CHECK(independent_residual(s) < 1e-10);
  CHECK(s.iterations < 50);
  CHECK(s.certified);
  for (double c : s.contraction_estimates) CHECK(c < 1.0);
  const double first_order = 0.05 * norm_Y(problem(10.0).w_alpha());
  CHECK(s.norm_Y() < 4.0 * first_order);
  CHECK(s.norm_Y() > first_order / 4.0);
}

TEST_CASE("solution invariants over the parameter grid") {
  for (double a : {0.1, 1.0, 10.0, 100.0}) {
    for (double l : {0.01, 0.05, 0.1}) {
      CAPTURE(a);
      CAPTURE(l);
      const VortexSolution s = problem(a).solve(l);
      CHECK(s.residual_X < 1e-10);
      CHECK(s.iterations < 50);
      CHECK(s.certified);
      CHECK(std::abs(mean(s.omega) - a) < 1e-9 * std::max(1.0, a));
      CHECK(odd_mode_size(s.w) < 1e-12 * s.w.scaled().cwiseAbs().maxCoeff());
      const Eigen::MatrixXd samples = synthesize(s.omega, 64);
      CHECK(samples.minCoeff() >= -1e-12 * samples.maxCoeff());
    }
  }
}

TEST_CASE("uniqueness in the contraction ball") {
  const double alpha = 10.0, lambda = 0.05;
  const VortexProblem& p = problem(alpha);
  const VortexSolution ref = p.solve(lambda);
  const double radius = 0.5 * ref.norm_Y();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ModeField kick = BandLimitedField::random(6, 900 + seed, true, true).sample(default_grid());
    kick *= radius * (0.2 + 0.08 * double(seed)) / norm_Y(kick);
    PicardOptions opt;
    opt.initial = ref.w + kick;
    const VortexSolution s = p.solve(lambda, opt);
    CHECK(norm_Y(s.w - ref.w) < 1e-8);
  }
}

TEST_CASE("damping, range and failure reporting") {
  auto g = default_grid();
  const VortexProblem& p = problem(1.0);
  const VortexSolution plain = p.solve(0.1);
  PicardOptions damped;
  damped.damping = 0.6;
  const VortexSolution d = p.solve(0.1, damped);
  CHECK(norm_Y(d.w - plain.w) < 1e-9);
  CHECK(d.iterations > plain.iterations);

  CHECK_THROWS_AS(p.solve(-0.01), DomainError);
  CHECK_THROWS_AS(p.solve(1.0), DomainError);
  damped.damping = 0.0;
  CHECK_THROWS_AS(p.solve(0.1, damped), DomainError);

  const VortexSolution beyond = p.solve(0.3);
  CHECK(beyond.residual_X < 1e-10);
  CHECK_FALSE(beyond.certified);

  SpectralConfig few;
  few.picard_max_iter = 2;
  auto g2 = make_grid(few);
  try {
    picard_solve(g2, 10.0, 0.1);
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual_history().size() == 2);
    CHECK(e.residual_history().back() > 1e-10);
  }
}

TEST_CASE("smooth dependence on lambda") {
  const VortexProblem& p = problem(1.0);
  std::vector<double> norms;
  for (int k = 0; k <= 10; ++k) norms.push_back(p.solve(0.02 * k).norm_Y());
  std::vector<double> inc;
  for (size_t k = 1; k < norms.size(); ++k) inc.push_back(norms[k] - norms[k - 1]);
  for (size_t k = 1; k + 1 < inc.size(); ++k) {
    const double nb = std::max(std::abs(inc[k - 1]), std::abs(inc[k + 1]));
    CHECK(std::abs(inc[k]) <= 10.0 * nb);
  }
}

TEST_CASE("expansion in lambda is second order") {
  auto g = default_grid();
  const auto zero = expansion_check_lambda(g, 1.0, 0.0);
  CHECK(zero.d_full == 0.0);
  CHECK(zero.d_half == 0.0);
  for (double a : {1.0, 100.0}) {
    const auto rep = expansion_check_lambda(g, a, 0.1);
    MESSAGE("alpha " << a << ": d ratio " << rep.ratio);
    CHECK(rep.quadratic);
  }
}

TEST_CASE("large circulation asymptotics") {
  auto g = default_grid();
  const auto zero = large_R_check(g, 0.0, {10.0, 30.0});
  for (const auto& row : zero.rows) CHECK(row.deviation == 0.0);

  const auto rep = large_R_check(g, 0.05, {10.0, 30.0, 100.0});
  for (const auto& row : rep.rows)
    MESSAGE("alpha " << row.alpha << " deviation " << row.deviation << " direction " << row.direction);
  CHECK(rep.deviation_decreasing);
  CHECK(rep.rows.back().direction < rep.rows.front().direction);
  CHECK_THROWS_AS(large_R_check(g, 0.05, {0.5}), DomainError);
}

TEST_CASE("small circulation asymptotics") {
  auto g = default_grid();
  const auto zero = small_R_check(g, 0.1, {0.0});
  CHECK(zero.rows[0].deviation == 0.0);

  const auto rep = small_R_check(g, 0.1, {0.5, 0.25});
  MESSAGE("small-alpha ratio " << rep.ratios[0]);
  CHECK(rep.ratios[0] >= 3.5);
  CHECK(rep.ratios[0] <= 4.5);

  // w - lambda alpha M G is of higher order: well below the first-order
  // term and shrinking at least linearly with alpha.
  const auto fo = small_R_check(g, 0.05, {0.1, 0.05});
  const double first = 0.05 * 0.1 * norm_Y(mg_profile(g));
  CHECK(fo.rows[0].first_order < 0.2 * first);
  CHECK(fo.rows[0].first_order / fo.rows[1].first_order >= 1.9);
  CHECK_THROWS_AS(small_R_check(g, 0.1, {2.0}), DomainError);
}
