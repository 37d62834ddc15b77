#include "burgers/mode_field.hpp"

#include <map>

#include <cmath>
#include <numbers>
#include <random>

#include "burgers/errors.hpp"

namespace burgers {

namespace {

constexpr double kPi = std::numbers::pi;

double weighted_sq(const RadialGrid& grid, const Eigen::VectorXcd& f) {
  return grid.area_weights().dot(f.cwiseAbs2());
}

void check_finite(const ModeField& w) {
  if (!w.scaled().allFinite()) throw NumericError("field has non-finite coefficients");
}

}  // namespace

// ModeField ---------------------------------------------------------------

ModeField::ModeField(GridPtr grid)
    : grid_(std::move(grid)),
      f_(Eigen::MatrixXcd::Zero(grid_->size(), grid_->n_modes() + 1)) {}

ModeField::ModeField(GridPtr grid, Eigen::MatrixXcd scaled)
    : grid_(std::move(grid)), f_(std::move(scaled)) {
  if (f_.rows() != grid_->size() || f_.cols() != grid_->n_modes() + 1)
    throw UsageError("mode array shape does not match the grid");
  f_.col(0) = f_.col(0).real().cast<cplx>();
}

ModeField ModeField::from_physical(GridPtr grid, const Eigen::MatrixXcd& coeffs) {
  const Eigen::VectorXd s = sqrt_gaussian(*grid);
  Eigen::MatrixXcd f = s.cwiseInverse().asDiagonal() * coeffs;
  return ModeField(std::move(grid), std::move(f));
}

ModeField ModeField::from_full(GridPtr grid, const Eigen::MatrixXcd& full) {
  const int N = grid->n_modes();
  if (full.cols() != 2 * N + 1) throw UsageError("full mode array has wrong width");
  return ModeField(grid, full.rightCols(N + 1));
}

Eigen::VectorXcd ModeField::scaled_mode(int n) const {
  const int m = std::abs(n);
  if (m > n_modes()) return Eigen::VectorXcd::Zero(n_r());
  return n >= 0 ? Eigen::VectorXcd(f_.col(m)) : Eigen::VectorXcd(f_.col(m).conjugate());
}

Eigen::VectorXcd ModeField::physical_mode(int n) const {
  return sqrt_gaussian(*grid_).cast<cplx>().cwiseProduct(scaled_mode(n));
}

Eigen::MatrixXcd ModeField::physical() const {
  return sqrt_gaussian(*grid_).asDiagonal() * f_;
}

Eigen::MatrixXcd ModeField::full() const {
  const int N = n_modes();
  Eigen::MatrixXcd out(n_r(), 2 * N + 1);
  out.rightCols(N + 1) = f_;
  for (int n = 1; n <= N; ++n) out.col(N - n) = f_.col(n).conjugate();
  return out;
}

double ModeField::value_at_node(int j, double theta) const {
  const double s = sqrt_gaussian(*grid_)(j);
  double v = f_(j, 0).real();
  for (int n = 1; n <= n_modes(); ++n) v += 2.0 * (f_(j, n) * std::polar(1.0, n * theta)).real();
  return s * v;
}

ModeField& ModeField::operator+=(const ModeField& o) {
  require_same_grid(*grid_, *o.grid_);
  f_ += o.f_;
  return *this;
}

ModeField& ModeField::operator-=(const ModeField& o) {
  require_same_grid(*grid_, *o.grid_);
  f_ -= o.f_;
  return *this;
}

ModeField& ModeField::operator*=(double s) {
  f_ *= s;
  return *this;
}

// VelocityField -----------------------------------------------------------

VelocityField::VelocityField(GridPtr g)
    : grid(std::move(g)),
      radial(Eigen::MatrixXcd::Zero(grid->size(), grid->n_modes() + 1)),
      azimuthal(Eigen::MatrixXcd::Zero(grid->size(), grid->n_modes() + 1)) {}

namespace {
Eigen::MatrixXcd mirror(const Eigen::MatrixXcd& half) {
  const int N = static_cast<int>(half.cols()) - 1;
  Eigen::MatrixXcd out(half.rows(), 2 * N + 1);
  out.rightCols(N + 1) = half;
  for (int n = 1; n <= N; ++n) out.col(N - n) = half.col(n).conjugate();
  return out;
}
}  // namespace

Eigen::MatrixXcd VelocityField::full_radial() const { return mirror(radial); }
Eigen::MatrixXcd VelocityField::full_azimuthal() const { return mirror(azimuthal); }

VelocityField& VelocityField::operator+=(const VelocityField& o) {
  require_same_grid(*grid, *o.grid);
  radial += o.radial;
  azimuthal += o.azimuthal;
  return *this;
}

VelocityField& VelocityField::operator*=(double s) {
  radial *= s;
  azimuthal *= s;
  return *this;
}

void require_same_grid(const RadialGrid& a, const RadialGrid& b) {
  if (!a.same_as(b)) throw UsageError("fields live on different grids");
}

// Reference profiles ------------------------------------------------------

double gaussian(double r) { return std::exp(-r * r / 4.0) / (4.0 * kPi); }

Eigen::VectorXd sqrt_gaussian(const RadialGrid& grid) {
  const Eigen::ArrayXd r = grid.nodes().array();
  return (-r.square() / 8.0).exp() / std::sqrt(4.0 * kPi);
}

ModeField gaussian_profile(GridPtr grid) {
  ModeField w(grid);
  w.scaled().col(0) = sqrt_gaussian(*grid).cast<cplx>();
  return w;
}

VelocityField vG_profile(GridPtr grid) {
  VelocityField v(grid);
  const Eigen::VectorXd& r = grid->nodes();
  for (int j = 0; j < grid->size(); ++j)
    v.azimuthal(j, 0) = -std::expm1(-r(j) * r(j) / 4.0) / (2.0 * kPi * r(j));
  return v;
}

ModeField g_lambda_profile(double lambda, GridPtr grid) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("asymmetry must lie in [0, 1)");
  ModeField w(grid);
  const Eigen::VectorXd s = sqrt_gaussian(*grid);
  const Eigen::VectorXd& r = grid->nodes();
  const double amp = std::sqrt(1.0 - lambda * lambda);
  for (int k = 0; 2 * k <= grid->n_modes(); ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j < grid->size(); ++j) {
      const double z = lambda * r(j) * r(j) / 4.0;
      w.scaled()(j, 2 * k) = amp * sign * s(j) * std::cyl_bessel_i(static_cast<double>(k), z);
    }
  }
  return w;
}

ModeField mg_profile(GridPtr grid) {
  ModeField w(grid);
  const Eigen::ArrayXd r = grid->nodes().array();
  w.scaled().col(2) = (-r.square() / 8.0 * sqrt_gaussian(*grid).array()).matrix().cast<cplx>();
  return w;
}

// Functionals -------------------------------------------------------------

double mean(const ModeField& w) {
  const RadialGrid& g = w.grid();
  return 2.0 * kPi * g.area_weights().dot(sqrt_gaussian(g).cwiseProduct(w.scaled().col(0).real()));
}

double inner_X(const ModeField& a, const ModeField& b) {
  require_same_grid(a.grid(), b.grid());
  const Eigen::VectorXd& W = a.grid().area_weights();
  double acc = W.dot((a.scaled().col(0).conjugate().cwiseProduct(b.scaled().col(0))).real());
  for (int n = 1; n <= a.n_modes(); ++n)
    acc += 2.0 * W.dot((a.scaled().col(n).conjugate().cwiseProduct(b.scaled().col(n))).real());
  return 2.0 * kPi * acc;
}

double norm_X(const ModeField& w) {
  check_finite(w);
  return std::sqrt(std::max(0.0, inner_X(w, w)));
}

double norm_Y(const ModeField& w) {
  check_finite(w);
  const RadialGrid& g = w.grid();
  const Eigen::VectorXd& r = g.nodes();
  const Eigen::VectorXd quarter_r = r / 4.0;
  double acc = 0.0;
  for (int n = 0; n <= w.n_modes(); ++n) {
    const Eigen::VectorXcd f = w.scaled().col(n);
    const Eigen::VectorXcd grad_r =
        g.d1_zero(mode_parity(n)) * f - quarter_r.cast<cplx>().cwiseProduct(f);
    double m = weighted_sq(g, f) + weighted_sq(g, grad_r);
    if (n > 0) m += double(n) * n * weighted_sq(g, f.cwiseQuotient(r.cast<cplx>()));
    acc += (n == 0 ? 1.0 : 2.0) * m;
  }
  return std::sqrt(2.0 * kPi * acc);
}

double tail_norm(const ModeField& w, int n_min) {
  const RadialGrid& g = w.grid();
  double acc = 0.0;
  for (int n = std::max(n_min, 0); n <= w.n_modes(); ++n)
    acc += (n == 0 ? 1.0 : 2.0) * weighted_sq(g, w.scaled().col(n));
  return std::sqrt(2.0 * kPi * acc);
}

double highest_mode_norm(const ModeField& w) { return tail_norm(w, w.n_modes()); }

namespace {

// Shared kernel of the Cartesian derivatives. A mode-n profile contributes
// up[n] to mode n+1 and down[n] to mode n-1, with
//   up   = a (f' - n f / r) - b r f,   down = c (f' + n f / r) - d r f.
ModeField cartesian_derivative(const ModeField& w, cplx a, cplx b, cplx c, cplx d) {
  const RadialGrid& g = w.grid();
  const int N = w.n_modes();
  const Eigen::VectorXcd r = g.nodes().cast<cplx>();
  ModeField out(w.grid_ptr());
  auto contribution = [&](int n, bool to_up) -> Eigen::VectorXcd {
    const Eigen::VectorXcd f = w.scaled_mode(n);
    const Eigen::VectorXcd df = g.d1_zero(mode_parity(n)) * f;
    const Eigen::VectorXcd nf_r = double(n) * f.cwiseQuotient(r);
    const Eigen::VectorXcd rf = r.cwiseProduct(f);
    if (to_up) return a * (df - nf_r) - b * rf;
    return c * (df + nf_r) - d * rf;
  };
  for (int m = 0; m <= N; ++m) {
    Eigen::VectorXcd acc = contribution(m - 1, true);
    if (m + 1 <= N) acc += contribution(m + 1, false);
    out.scaled().col(m) = acc;
  }
  out.scaled().col(0) = out.scaled().col(0).real().cast<cplx>();
  return out;
}

}  // namespace

ModeField partial_x1(const ModeField& w) {
  return cartesian_derivative(w, 0.5, 0.125, 0.5, 0.125);
}

ModeField partial_x2(const ModeField& w) {
  const cplx i(0.0, 1.0);
  return cartesian_derivative(w, -0.5 * i, -0.125 * i, 0.5 * i, 0.125 * i);
}

// Synthesis ---------------------------------------------------------------

namespace {

// cos(n theta_m), sin(n theta_m) for n = -N..N, theta_m = 2 pi m / M. For a
// handful of modes the dense transform beats per-row FFTs.
struct DftTable {
  Eigen::MatrixXd c, s;  // (2N + 1) x M
};

const DftTable& dft_table(int N, int M) {
  thread_local std::map<std::pair<int, int>, DftTable> cache;
  auto it = cache.find({N, M});
  if (it != cache.end()) return it->second;
  DftTable t{Eigen::MatrixXd(2 * N + 1, M), Eigen::MatrixXd(2 * N + 1, M)};
  for (int n = -N; n <= N; ++n)
    for (int m = 0; m < M; ++m) {
      const double a = 2.0 * kPi * double(n) * m / M;
      t.c(n + N, m) = std::cos(a);
      t.s(n + N, m) = std::sin(a);
    }
  return cache.emplace(std::make_pair(N, M), std::move(t)).first->second;
}

}  // namespace

Eigen::MatrixXd synthesize_full(const Eigen::MatrixXcd& full, int theta_points) {
  const int N = (static_cast<int>(full.cols()) - 1) / 2;
  const int M = theta_points;
  if (M < 2 * N + 1) throw DomainError("too few theta points: modes would alias");
  const DftTable& t = dft_table(N, M);
  return full.real() * t.c - full.imag() * t.s;
}

Eigen::MatrixXcd project_full(const Eigen::MatrixXd& samples, int n_modes) {
  const int M = static_cast<int>(samples.cols());
  const int N = n_modes;
  if (M < 2 * N + 1) throw DomainError("too few theta points: modes would alias");
  const DftTable& t = dft_table(N, M);
  Eigen::MatrixXcd out(samples.rows(), 2 * N + 1);
  out.real() = samples * t.c.transpose() / double(M);
  out.imag() = -(samples * t.s.transpose()) / double(M);
  return out;
}

Eigen::MatrixXd synthesize(const ModeField& w, int theta_points) {
  Eigen::MatrixXcd phys = sqrt_gaussian(w.grid()).asDiagonal() * w.full();
  return synthesize_full(phys, theta_points);
}

ModeField project(GridPtr grid, const Eigen::MatrixXd& samples) {
  if (samples.rows() != grid->size()) throw UsageError("sample rows do not match the grid");
  const int N = grid->n_modes();
  const Eigen::MatrixXcd full = project_full(samples, N);
  return ModeField::from_physical(grid, full.rightCols(N + 1));
}

// Test fields -------------------------------------------------------------

BandLimitedField BandLimitedField::random(int max_mode, std::uint64_t seed, bool zero_mean,
                                          bool even_only) {
  BandLimitedField b;
  b.max_mode = max_mode;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  b.coeffs.assign(max_mode + 1, std::vector<cplx>(b.radial_terms, cplx(0.0)));
  for (int n = 0; n <= max_mode; ++n) {
    if (even_only && n % 2 != 0) continue;
    for (int k = 0; k < b.radial_terms; ++k) {
      const double re = normal(rng);
      const double im = (n == 0) ? 0.0 : normal(rng);
      b.coeffs[n][k] = cplx(re, im);
    }
  }
  if (zero_mean) {
    // int (r/2)^{2k} e^{-r^2/4} r dr / (2k)! = 2 k! / (2k)!
    double m = 0.0;
    for (int k = 0; k < b.radial_terms; ++k)
      m += b.coeffs[0][k].real() * 2.0 * std::tgamma(k + 1.0) / std::tgamma(2.0 * k + 1.0);
    b.gaussian_shift = 2.0 * kPi * m;
  }
  return b;
}

cplx BandLimitedField::coefficient(int n, double r) const {
  cplx c(0.0);
  if (n <= max_mode) {
    for (int k = 0; k < radial_terms; ++k) {
      const int p = n + 2 * k;
      c += coeffs[n][k] * std::pow(r / 2.0, p) / std::tgamma(p + 1.0);
    }
    c *= std::exp(-r * r / 4.0);
  }
  if (n == 0) c -= gaussian_shift * gaussian(r);
  return c;
}

double BandLimitedField::value(double x1, double x2) const {
  const double r = std::hypot(x1, x2);
  const double theta = std::atan2(x2, x1);
  double v = coefficient(0, r).real();
  for (int n = 1; n <= max_mode; ++n) v += 2.0 * (coefficient(n, r) * std::polar(1.0, n * theta)).real();
  return v;
}

ModeField BandLimitedField::sample(GridPtr grid) const {
  const int N = grid->n_modes();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(grid->size(), N + 1);
  for (int n = 0; n <= std::min(N, max_mode); ++n)
    for (int j = 0; j < grid->size(); ++j) c(j, n) = coefficient(n, grid->nodes()(j));
  return ModeField::from_physical(std::move(grid), c);
}

}  // namespace burgers
