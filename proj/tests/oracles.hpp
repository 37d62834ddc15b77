#pragma once

// Independent reference computations used by the unit tests. Nothing here
// touches the radial grid: integrals are plain trapezoid sums on a
// Cartesian square, derivatives are centered differences of closed forms.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

inline double gaussian(double x1, double x2) {
  return std::exp(-(x1 * x1 + x2 * x2) / 4.0) / (4.0 * pi);
}

/// Trapezoid rule on [-L, L]^2; spectrally accurate for smooth integrands
/// that decay like a Gaussian well inside the box.
inline double cartesian_integral(const std::function<double(double, double)>& f,
                                 double L = 16.0, int n = 321) {
  const double h = 2.0 * L / (n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x1 = -L + i * h;
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double x2 = -L + j * h;
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      acc += wi * wj * f(x1, x2);
    }
  }
  return acc * h * h;
}

/// Azimuthal Fourier coefficient (1/2pi) int f(r, theta) e^{-i n theta} d theta
/// by the periodic trapezoid rule.
inline std::complex<double> azimuthal_coefficient(const std::function<double(double, double)>& f,
                                                  double r, int n, int m = 256) {
  std::complex<double> acc(0.0);
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * pi * k / m;
    acc += f(r * std::cos(t), r * std::sin(t)) * std::polar(1.0, -n * t);
  }
  return acc / double(m);
}

/// 8th-order centered partial derivative of a closed-form function.
inline double partial(const std::function<double(double, double)>& f, double x1, double x2,
                      int axis, double h = 2e-3) {
  static const double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  double acc = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const double d = k * h;
    if (axis == 0)
      acc += c[k - 1] * (f(x1 + d, x2) - f(x1 - d, x2));
    else
      acc += c[k - 1] * (f(x1, x2 + d) - f(x1, x2 - d));
  }
  return acc / h;
}

}  // namespace oracle
