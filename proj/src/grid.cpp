#include "burgers/grid.hpp"

#include <cmath>
#include <vector>

#include "burgers/errors.hpp"

namespace burgers {

void SpectralConfig::validate() const {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ConfigError("r_max", "must be a positive finite radius");
  if (n_r < 16) throw ConfigError("n_r", "need at least 16 radial nodes");
  if (n_modes < 2) throw ConfigError("n_modes", "need at least modes |n| <= 2");
  if (!(dealias_factor >= 1.0)) throw ConfigError("dealias_factor", "must be >= 1");
  if (!(picard_tol > 0.0)) throw ConfigError("picard_tol", "must be positive");
  if (picard_max_iter < 1) throw ConfigError("picard_max_iter", "must be >= 1");
}

Eigen::MatrixXd fd_weights(double z, const Eigen::VectorXd& x, int max_order) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, max_order + 1);
  double c1 = 1.0;
  double c4 = x(0) - z;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x(i) - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x(i) - x(j);
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c;
}

namespace {

// Weights integrating the interpolant through `offsets` over [a, b]
// (all in units of the grid spacing).
Eigen::VectorXd interpolant_integral(const std::vector<int>& offsets, double shift,
                                     double a, double b) {
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const int m = static_cast<int>(offsets.size());
  MatL v(m, m);
  VecL moments(m);
  for (int p = 0; p < m; ++p) {
    for (int i = 0; i < m; ++i) v(p, i) = std::pow(static_cast<long double>(offsets[i]) + shift, p);
    moments(p) = (std::pow(static_cast<long double>(b), p + 1) -
                  std::pow(static_cast<long double>(a), p + 1)) / (p + 1);
  }
  const VecL w = v.fullPivLu().solve(moments);
  return w.cast<double>();
}

int fft_friendly(int m) {
  for (;; ++m) {
    int k = m;
    for (int p : {2, 3, 5})
      while (k % p == 0) k /= p;
    if (k == 1) return m;
  }
}

}  // namespace

RadialGrid::RadialGrid(const SpectralConfig& config) : config_(config) {
  config_.validate();
  const int n = config_.n_r;
  const int K = kHalfWidth;
  h_ = config_.r_max / (n - 0.5);
  r_.resize(n);
  for (int j = 0; j < n; ++j) r_(j) = (j + 0.5) * h_;
  r_(n - 1) = config_.r_max;

  Eigen::VectorXd offs(2 * K + 1);
  for (int o = -K; o <= K; ++o) offs(o + K) = o;
  const Eigen::MatrixXd w = fd_weights(0.0, offs, 2);
  stencil_d1_ = w.col(1) / h_;
  stencil_d2_ = w.col(2) / (h_ * h_);

  std::vector<int> cell_offsets, half_offsets;
  for (int o = -K + 1; o <= K; ++o) cell_offsets.push_back(o);
  for (int o = -K; o <= K - 1; ++o) half_offsets.push_back(o);
  cell_w_ = interpolant_integral(cell_offsets, 0.0, 0.0, 1.0) * h_;
  half_cell_w_ = interpolant_integral(half_offsets, 0.0, -0.5, 0.0) * h_;

  // Total integral: half cell plus every full cell, folded with odd parity.
  line_w_ = Eigen::VectorXd::Zero(n);
  auto deposit = [&](int k, double wk) {
    if (k < 0)
      line_w_(-k - 1) -= wk;
    else if (k < n)
      line_w_(k) += wk;
  };
  for (int i = 0; i < 2 * K; ++i) deposit(-K + i, half_cell_w_(i));
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i < 2 * K; ++i) deposit(j - K + 1 + i, cell_w_(i));
  area_w_ = line_w_.cwiseProduct(r_);

  d1_even_ = d1(Parity::Even);
  d1_odd_ = d1(Parity::Odd);
  d2_even_ = d2(Parity::Even);
  d2_odd_ = d2(Parity::Odd);
}

Eigen::SparseMatrix<double> RadialGrid::build(const Eigen::VectorXd& centered, Parity p,
                                              OuterClosure c) const {
  const int n = size();
  const int K = kHalfWidth;
  const double sign = (p == Parity::Even) ? 1.0 : -1.0;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * (2 * K + 1));
  for (int i = 0; i < n; ++i) {
    for (int o = -K; o <= K; ++o) {
      const int k = i + o;
      const double s = centered(o + K);
      if (k < 0) {
        trips.emplace_back(i, -k - 1, sign * s);
      } else if (k >= n) {
        if (c.kind == OuterClosure::Kind::PowerDecay) {
          const double rk = (k + 0.5) * h_;
          trips.emplace_back(i, n - 1, s * std::pow(config_.r_max / rk, c.exponent));
        }
      } else {
        trips.emplace_back(i, k, s);
      }
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Eigen::SparseMatrix<double> RadialGrid::d1(Parity p, OuterClosure c) const {
  return build(stencil_d1_, p, c);
}

Eigen::SparseMatrix<double> RadialGrid::d2(Parity p, OuterClosure c) const {
  return build(stencil_d2_, p, c);
}

Eigen::SparseMatrix<double> RadialGrid::laplacian(int n, OuterClosure c) const {
  const Parity p = mode_parity(n);
  const Eigen::VectorXd inv_r = r_.cwiseInverse();
  Eigen::SparseMatrix<double> lap = d2(p, c);
  lap += inv_r.asDiagonal() * d1(p, c);
  lap -= sparse_diagonal<double>(static_cast<double>(n) * n * inv_r.cwiseAbs2());
  return lap;
}

Eigen::VectorXd RadialGrid::cumulative_from_origin(const Eigen::VectorXd& F) const {
  const int n = size();
  const int K = kHalfWidth;
  auto at = [&](int k) {
    if (k < 0) return -F(-k - 1);
    return k < n ? F(k) : 0.0;
  };
  Eigen::VectorXd out(n);
  double acc = 0.0;
  for (int i = 0; i < 2 * K; ++i) acc += half_cell_w_(i) * at(-K + i);
  out(0) = acc;
  for (int j = 0; j + 1 < n; ++j) {
    double cell = 0.0;
    for (int i = 0; i < 2 * K; ++i) cell += cell_w_(i) * at(j - K + 1 + i);
    acc += cell;
    out(j + 1) = acc;
  }
  return out;
}

Eigen::VectorXd RadialGrid::cumulative_to_outer(const Eigen::VectorXd& F) const {
  const int n = size();
  const int K = kHalfWidth;
  auto at = [&](int k) {
    if (k < 0) return -F(-k - 1);
    return k < n ? F(k) : 0.0;
  };
  Eigen::VectorXd out(n);
  double acc = 0.0;
  out(n - 1) = 0.0;
  for (int j = n - 2; j >= 0; --j) {
    double cell = 0.0;
    for (int i = 0; i < 2 * K; ++i) cell += cell_w_(i) * at(j - K + 1 + i);
    acc += cell;
    out(j) = acc;
  }
  return out;
}

int RadialGrid::dealiased_theta_points() const {
  const int base = 2 * config_.n_modes + 1;
  return fft_friendly(static_cast<int>(std::ceil(config_.dealias_factor * base)));
}

bool RadialGrid::same_as(const RadialGrid& other) const {
  return this == &other ||
         (config_.r_max == other.config_.r_max && config_.n_r == other.config_.n_r &&
          config_.n_modes == other.config_.n_modes &&
          config_.dealias_factor == other.config_.dealias_factor);
}

}  // namespace burgers
