#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <vector>

#include "burgers/errors.hpp"

namespace burgers {

template <typename Scalar>
struct ArnoldiResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Eigen::VectorXcd ritz_values;
  Eigen::VectorXd residuals;   // |h_{m+1,m} y_m| per Ritz pair
  Eigen::MatrixXcd ritz_vectors;  // columns in the original coordinates
  int dimension = 0;
};

/// Plain Arnoldi with twice-repeated Gram-Schmidt. `op(v)` applies the
/// operator, `inner(a, b)` is the (possibly weighted) scalar product and
/// `project(v)` keeps iterates in an invariant subspace (identity if not
/// needed). Ritz pairs are returned unsorted.
template <typename Scalar, typename Op, typename Inner, typename Project>
ArnoldiResult<Scalar> arnoldi(Op&& op, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> start, int m,
                              Inner&& inner, Project&& project, bool want_vectors = false) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  auto norm = [&](const Vector& v) { return std::sqrt(std::abs(inner(v, v))); };

  std::vector<Vector> V;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> H =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(m + 1, m);
  project(start);
  const double n0 = norm(start);
  if (!(n0 > 0.0)) throw NumericError("Arnoldi start vector is zero");
  V.push_back(start / Scalar(n0));

  int k = 0;
  for (; k < m; ++k) {
    Vector w = op(V[k]);
    project(w);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= k; ++j) {
        const Scalar h = inner(V[j], w);
        H(j, k) += h;
        w -= h * V[j];
      }
    const double beta = norm(w);
    H(k + 1, k) = beta;
    if (!std::isfinite(beta)) throw NumericError("Arnoldi produced non-finite iterates");
    if (beta < 1e-14 * std::abs(H(k, k)) + 1e-300) {
      ++k;
      break;
    }
    V.push_back(w / Scalar(beta));
  }

  const int dim = k;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(
      H.topLeftCorner(dim, dim).template cast<std::complex<double>>());
  if (es.info() != Eigen::Success) throw NumericError("Hessenberg eigensolve failed");

  ArnoldiResult<Scalar> out;
  out.dimension = dim;
  out.ritz_values = es.eigenvalues();
  out.residuals.resize(dim);
  const std::complex<double> hlast = std::complex<double>(H(dim, dim - 1));
  for (int i = 0; i < dim; ++i) out.residuals(i) = std::abs(hlast * es.eigenvectors()(dim - 1, i));
  if (want_vectors) {
    out.ritz_vectors = Eigen::MatrixXcd::Zero(V[0].size(), dim);
    for (int j = 0; j < dim; ++j)
      out.ritz_vectors += V[j].template cast<std::complex<double>>() * es.eigenvectors().row(j);
  }
  return out;
}

}  // namespace burgers
