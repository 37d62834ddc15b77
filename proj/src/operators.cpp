#include "burgers/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "burgers/arnoldi.hpp"
#include "burgers/errors.hpp"

namespace burgers {

namespace {

constexpr double kPi = std::numbers::pi;

void require_zero_mean(const ModeField& w, const char* what) {
  const double m = mean(w);
  if (std::abs(m) > 1e-8 * norm_X(w) + 1e-14)
    throw DomainError(std::string(what) + " requires a zero-mean field (mean " +
                      std::to_string(m) + ")");
}

Eigen::VectorXcd as_complex(const Eigen::VectorXd& v) { return v.cast<cplx>(); }

}  // namespace

Eigen::VectorXd swirl_rate(const RadialGrid& grid) {
  const Eigen::VectorXd& r = grid.nodes();
  Eigen::VectorXd phi(r.size());
  for (Eigen::Index j = 0; j < r.size(); ++j)
    phi(j) = -std::expm1(-r(j) * r(j) / 4.0) / (2.0 * kPi * r(j) * r(j));
  return phi;
}

Eigen::SparseMatrix<double> drift_matrix(const RadialGrid& grid, int n) {
  const Parity p = mode_parity(n);
  const Eigen::ArrayXd r = grid.nodes().array();
  Eigen::SparseMatrix<double> m = grid.d2_zero(p);
  m += r.inverse().matrix().asDiagonal() * grid.d1_zero(p);
  const Eigen::VectorXd diag = (0.5 - r.square() / 16.0 - double(n) * n / r.square()).matrix();
  m += sparse_diagonal<double>(diag);
  m.makeCompressed();
  return m;
}

// LinearOperators ---------------------------------------------------------

LinearOperators::LinearOperators(GridPtr grid)
    : grid_(std::move(grid)), bs_(grid_), phi_(swirl_rate(*grid_)), s_(sqrt_gaussian(*grid_)) {
  for (int n = 0; n <= grid_->n_modes(); ++n) drift_.push_back(drift_matrix(*grid_, n));
}

ModeField LinearOperators::apply_L(const ModeField& w) const {
  require_same_grid(*grid_, w.grid());
  ModeField out(grid_);
  for (int n = 0; n <= w.n_modes(); ++n) {
    const Eigen::VectorXcd& f = w.scaled().col(n);
    out.scaled().col(n) = drift_[n] * f;
  }
  return out;
}

ModeField LinearOperators::apply_M(const ModeField& w) const {
  require_same_grid(*grid_, w.grid());
  const RadialGrid& g = *grid_;
  const int N = w.n_modes();
  const Eigen::ArrayXcd r = g.nodes().cast<cplx>().array();
  auto part = [&](int n, double sign) -> Eigen::VectorXcd {
    const Eigen::VectorXcd f = w.scaled_mode(n);
    const Eigen::ArrayXcd df = (g.d1_zero(mode_parity(n)) * f).array();
    return (0.25 * (r * df + sign * double(n) * f.array()) - r.square() / 16.0 * f.array())
        .matrix();
  };
  ModeField out(grid_);
  for (int m = 0; m <= N; ++m) {
    Eigen::VectorXcd acc = part(m - 2, -1.0);
    if (m + 2 <= N) acc += part(m + 2, 1.0);
    out.scaled().col(m) = acc;
  }
  out.scaled().col(0) = out.scaled().col(0).real().cast<cplx>();
  return out;
}

ModeField LinearOperators::apply_Lambda_unchecked(const ModeField& w) const {
  require_same_grid(*grid_, w.grid());
  ModeField out(grid_);
  const Eigen::VectorXcd phi = as_complex(phi_);
  const Eigen::VectorXcd s = as_complex(s_);
  for (int n = 1; n <= w.n_modes(); ++n) {
    const Eigen::VectorXcd& f = w.scaled().col(n);
    const Eigen::VectorXcd psi = bs_.streamfunction_mode(n, s.cwiseProduct(f));
    out.scaled().col(n) =
        cplx(0.0, n) * (phi.cwiseProduct(f) - 0.5 * s.cwiseProduct(psi));
  }
  return out;
}

ModeField LinearOperators::apply_Lambda(const ModeField& w) const {
  require_zero_mean(w, "Lambda");
  return apply_Lambda_unchecked(w);
}

ModeField LinearOperators::apply_L_minus(double alpha, const ModeField& w) const {
  ModeField out = apply_L(w);
  if (alpha != 0.0) out -= alpha * apply_Lambda_unchecked(w);
  return out;
}

// ResolventSolve ----------------------------------------------------------

ResolventSolve::ResolventSolve(GridPtr grid, double alpha) : ResolventSolve(grid, alpha, 0.0, 1.0) {}

ResolventSolve ResolventSolve::implicit_step(GridPtr grid, double alpha, double tau) {
  if (!(tau > 0.0)) throw DomainError("implicit step needs tau > 0");
  return ResolventSolve(std::move(grid), alpha, 1.0, -tau);
}

ResolventSolve::ResolventSolve(GridPtr grid, double alpha, double a, double b)
    : grid_(std::move(grid)), alpha_(alpha), a_(a), b_(b) {
  if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
  const RadialGrid& g = *grid_;
  const int nr = g.size();
  const Eigen::VectorXd s = sqrt_gaussian(g);
  const Eigen::VectorXd phi = swirl_rate(g);

  // Mode 0: Lambda vanishes; for a = 0 border with the kernel direction
  // G^{1/2} and the mean functional.
  {
    const Eigen::SparseMatrix<double> L0 = drift_matrix(g, 0);
    std::vector<Eigen::Triplet<double>> t;
    for (int k = 0; k < L0.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(L0, k); it; ++it)
        t.emplace_back(it.row(), it.col(), b_ * it.value());
    int size = nr;
    if (a_ != 0.0) {
      for (int j = 0; j < nr; ++j) t.emplace_back(j, j, a_);
    } else {
      size = nr + 1;
      const Eigen::VectorXd m = 2.0 * kPi * g.area_weights().cwiseProduct(s);
      const double scale = m.cwiseAbs().maxCoeff();
      for (int j = 0; j < nr; ++j) {
        t.emplace_back(j, nr, s(j));
        t.emplace_back(nr, j, m(j) / scale);
      }
    }
    Eigen::SparseMatrix<double> A(size, size);
    A.setFromTriplets(t.begin(), t.end());
    A.makeCompressed();
    mode0_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>(A);
    if (mode0_->info() != Eigen::Success) throw NumericError("resolvent factorization failed for mode 0");
  }

  for (int n = 1; n <= g.n_modes(); ++n) {
    const Eigen::SparseMatrix<double> Ln = drift_matrix(g, n);
    const Eigen::SparseMatrix<double> lap = g.laplacian(n, OuterClosure::decay(n));
    const cplx in(0.0, n);
    std::vector<Eigen::Triplet<cplx>> t;
    for (int k = 0; k < Ln.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(Ln, k); it; ++it)
        t.emplace_back(it.row(), it.col(), b_ * it.value());
    for (int k = 0; k < lap.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(lap, k); it; ++it)
        t.emplace_back(nr + it.row(), nr + it.col(), -it.value());
    for (int j = 0; j < nr; ++j) {
      t.emplace_back(j, j, a_ - b_ * alpha * in * phi(j));
      t.emplace_back(j, nr + j, b_ * alpha * in * 0.5 * s(j));
      t.emplace_back(nr + j, j, -s(j));
    }
    Eigen::SparseMatrix<cplx> A(2 * nr, 2 * nr);
    A.setFromTriplets(t.begin(), t.end());
    A.makeCompressed();
    auto lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<cplx>>>();
    lu->compute(A);
    if (lu->info() != Eigen::Success)
      throw NumericError("resolvent factorization failed for mode " + std::to_string(n));
    modes_.push_back(std::move(lu));
  }
}

ModeField ResolventSolve::solve(const ModeField& rhs) const {
  require_same_grid(*grid_, rhs.grid());
  const int nr = grid_->size();
  ModeField out(grid_);
  {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(a_ != 0.0 ? nr : nr + 1);
    b.head(nr) = rhs.scaled().col(0).real();
    const Eigen::VectorXd x = mode0_->solve(b);
    out.scaled().col(0) = x.head(nr).cast<cplx>();
  }
  for (int n = 1; n <= rhs.n_modes(); ++n) {
    const Eigen::VectorXcd& col = rhs.scaled().col(n);
    if (col.cwiseAbs().maxCoeff() == 0.0) continue;
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(2 * nr);
    b.head(nr) = col;
    const Eigen::VectorXcd x = modes_[n - 1]->solve(b);
    out.scaled().col(n) = x.head(nr);
  }
  if (!out.scaled().allFinite()) throw NumericError("resolvent produced non-finite values");
  return out;
}

// Free-function forms -----------------------------------------------------

ModeField apply_L(const ModeField& w) {
  ModeField out(w.grid_ptr());
  for (int n = 0; n <= w.n_modes(); ++n)
    out.scaled().col(n) = drift_matrix(w.grid(), n) * w.scaled().col(n);
  return out;
}

ModeField apply_M(const ModeField& w) { return LinearOperators(w.grid_ptr()).apply_M(w); }

ModeField apply_Lambda(const ModeField& w) {
  require_zero_mean(w, "Lambda");
  return LinearOperators(w.grid_ptr()).apply_Lambda_unchecked(w);
}

ModeField solve_resolvent(double alpha, const ModeField& rhs) {
  require_zero_mean(rhs, "resolvent");
  return ResolventSolve(rhs.grid_ptr(), alpha).solve(rhs);
}

// Spectrum ----------------------------------------------------------------

std::vector<double> spectrum_L(const GridPtr& grid, int k) {
  const RadialGrid& g = *grid;
  const int nr = g.size();
  if (k < 1 || k > nr / 8) throw DomainError("eigenvalue count must lie in 1..n_r/8");
  constexpr double shift = -0.2;
  const int krylov = std::min(nr - 2, std::max(40, 4 * k));
  const Eigen::VectorXd s = sqrt_gaussian(g);
  const Eigen::VectorXd m = g.area_weights().cwiseProduct(s);
  const double ms = m.dot(s);

  std::vector<std::pair<double, double>> all;  // (eigenvalue, error bound)
  for (int n = 0; n <= g.n_modes(); ++n) {
    Eigen::SparseMatrix<double> A = -drift_matrix(g, n);
    A -= shift * sparse_diagonal<double>(Eigen::VectorXd::Ones(nr));
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
    if (lu.info() != Eigen::Success) throw NumericError("shift-invert factorization failed");

    auto op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return lu.solve(v); };
    auto inner = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
      return g.area_weights().dot(a.cwiseProduct(b));
    };
    auto project = [&](Eigen::VectorXd& v) {
      if (n == 0) v -= (m.dot(v) / ms) * s;
    };
    // Smooth start with the right behaviour at the origin.
    const Eigen::ArrayXd r = g.nodes().array();
    Eigen::VectorXd start = (r.pow(n) * (1.0 + r.square()) * (-r.square() / 8.0).exp()).matrix();
    const auto res = arnoldi<double>(op, start, krylov, inner, project);

    for (int i = 0; i < res.dimension; ++i) {
      const cplx theta = res.ritz_values(i);
      if (std::abs(theta) < 1e-12) continue;
      const cplx lam = shift + 1.0 / theta;
      const double err = res.residuals(i) / std::norm(theta);
      for (int copy = 0; copy < (n == 0 ? 1 : 2); ++copy) all.push_back({lam.real(), err});
    }
  }
  std::sort(all.begin(), all.end());
  if (static_cast<int>(all.size()) < k) throw NumericError("too few Ritz values");
  std::vector<double> out;
  for (int i = 0; i < k; ++i) {
    if (all[i].second > 1e-8)
      throw NumericError("eigenvalue " + std::to_string(i) + " did not converge (error bound " +
                         std::to_string(all[i].second) + ")");
    out.push_back(all[i].first);
  }
  return out;
}

std::vector<Eigenvalue> group_eigenvalues(const std::vector<double>& sorted, double tol) {
  std::vector<Eigenvalue> out;
  for (double v : sorted) {
    if (!out.empty() && std::abs(v - out.back().value) <= tol) {
      out.back().multiplicity += 1;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

}  // namespace burgers
