#include "burgers/biot_savart.hpp"

#include "burgers/errors.hpp"

namespace burgers {

StreamSolve::StreamSolve(const RadialGrid& grid, int n) : n_(n) {
  if (n < 1) throw DomainError("streamfunction solve needs mode n >= 1");
  op_ = -grid.laplacian(n, OuterClosure::decay(n));
  op_.makeCompressed();
  lu_.compute(op_);
  if (lu_.info() != Eigen::Success)
    throw NumericError("streamfunction factorization failed for mode " + std::to_string(n));
}

Eigen::VectorXcd StreamSolve::solve(const Eigen::VectorXcd& w_n) const {
  const Eigen::VectorXd re = lu_.solve(w_n.real());
  const Eigen::VectorXd im = lu_.solve(w_n.imag());
  Eigen::VectorXcd psi(re.size());
  psi.real() = re;
  psi.imag() = im;
  return psi;
}

BiotSavart::BiotSavart(GridPtr grid) : grid_(std::move(grid)) {
  for (int n = 1; n <= grid_->n_modes(); ++n)
    solves_.push_back(std::make_unique<StreamSolve>(*grid_, n));
}

Eigen::VectorXcd BiotSavart::streamfunction_mode(int n, const Eigen::VectorXcd& w_n) const {
  if (n < 1 || n > grid_->n_modes()) throw DomainError("mode index outside 1..N");
  return solves_[n - 1]->solve(w_n);
}

VelocityField BiotSavart::velocity(const ModeField& w) const {
  require_same_grid(*grid_, w.grid());
  const RadialGrid& g = *grid_;
  const Eigen::VectorXd& r = g.nodes();
  const Eigen::VectorXd s = sqrt_gaussian(g);
  VelocityField v(grid_);

  // Mode 0: circulation inside radius r.
  const Eigen::VectorXd F = r.cwiseProduct(s).cwiseProduct(w.scaled().col(0).real());
  v.azimuthal.col(0) = g.cumulative_from_origin(F).cwiseQuotient(r).cast<cplx>();

  const cplx i(0.0, 1.0);
  for (int n = 1; n <= w.n_modes(); ++n) {
    const Eigen::VectorXcd wn = s.cast<cplx>().cwiseProduct(w.scaled().col(n));
    const Eigen::VectorXcd psi = streamfunction_mode(n, wn);
    v.radial.col(n) = (i * double(n)) * psi.cwiseQuotient(r.cast<cplx>());
    v.azimuthal.col(n) = -(g.d1(mode_parity(n), OuterClosure::decay(n)).cast<cplx>() * psi);
  }
  return v;
}

Eigen::VectorXcd streamfunction_mode(const GridPtr& grid, int n, const Eigen::VectorXcd& w_n) {
  if (n < 1) throw DomainError("streamfunction solve needs mode n >= 1");
  return StreamSolve(*grid, n).solve(w_n);
}

VelocityField velocity_from_vorticity(const ModeField& w) {
  return BiotSavart(w.grid_ptr()).velocity(w);
}

PolarSamples& PolarSamples::operator+=(const PolarSamples& o) {
  radial += o.radial;
  azimuthal += o.azimuthal;
  return *this;
}

PolarSamples sample_velocity(const VelocityField& v, int theta_points) {
  return {synthesize_full(v.full_radial(), theta_points),
          synthesize_full(v.full_azimuthal(), theta_points)};
}

PolarSamples sample_scaled_gradient(const ModeField& w, int theta_points) {
  const RadialGrid& g = w.grid();
  const int N = w.n_modes();
  const Eigen::VectorXcd r = g.nodes().cast<cplx>();
  const cplx i(0.0, 1.0);
  const Eigen::MatrixXcd f = w.full();
  Eigen::MatrixXcd dr(f.rows(), f.cols()), dth(f.rows(), f.cols());
  for (int n = -N; n <= N; ++n) {
    const Eigen::VectorXcd fn = f.col(n + N);
    dr.col(n + N) = g.d1_zero(mode_parity(n)) * fn - 0.25 * r.cwiseProduct(fn);
    dth.col(n + N) = (i * double(n)) * fn.cwiseQuotient(r);
  }
  return {synthesize_full(dr, theta_points), synthesize_full(dth, theta_points)};
}

ModeField dot_project(GridPtr grid, const PolarSamples& v, const PolarSamples& grad) {
  const Eigen::MatrixXd prod =
      v.radial.cwiseProduct(grad.radial) + v.azimuthal.cwiseProduct(grad.azimuthal);
  const int N = grid->n_modes();
  return ModeField::from_full(std::move(grid), project_full(prod, N));
}

ModeField advect(const VelocityField& v, const ModeField& w, int theta_points) {
  require_same_grid(*v.grid, w.grid());
  const int M = theta_points > 0 ? theta_points : w.grid().dealiased_theta_points();
  return dot_project(w.grid_ptr(), sample_velocity(v, M), sample_scaled_gradient(w, M));
}

namespace {

// (1/r) d_r (r a_n) + (i n / r) b_n  per mode, with the r^{-n} tail closure.
Eigen::MatrixXcd radial_plus_angular(const VelocityField& v, const Eigen::MatrixXcd& a,
                                     const Eigen::MatrixXcd& b, double sign) {
  const RadialGrid& g = *v.grid;
  const Eigen::VectorXcd r = g.nodes().cast<cplx>();
  const cplx i(0.0, 1.0);
  Eigen::MatrixXcd out(a.rows(), a.cols());
  for (int n = 0; n < a.cols(); ++n) {
    const Eigen::SparseMatrix<cplx> D = g.d1(mode_parity(n), OuterClosure::decay(n)).cast<cplx>();
    const Eigen::VectorXcd ra = r.cwiseProduct(a.col(n));
    out.col(n) = (D * ra).cwiseQuotient(r) + sign * (i * double(n)) * b.col(n).cwiseQuotient(r);
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd divergence(const VelocityField& v) {
  return radial_plus_angular(v, v.radial, v.azimuthal, 1.0);
}

Eigen::MatrixXcd curl(const VelocityField& v) {
  return radial_plus_angular(v, v.azimuthal, v.radial, -1.0);
}

}  // namespace burgers
