#include "parasemi/exponential_quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "parasemi/error.hpp"

namespace parasemi {

std::array<double, 3> exp_moments(double z) {
  if (z < 0.0) throw Error(ErrorKind::input, "exponential moment needs z >= 0");
  std::array<double, 3> psi{};
  if (z < 1.5) {
    // psi_m = sum_n (-z)^n m! / (m+n+1)!, from expanding e^{-z(1-x)} and
    // integrating x^m (1-x)^n exactly.
    for (int m = 0; m < 3; ++m) {
      double term = 1.0;  // (-z)^n m!/(m+n+1)! at n = 0 is 1/(m+1)
      for (int i = 1; i <= m + 1; ++i) term /= i;
      double mf = 1.0;
      for (int i = 1; i <= m; ++i) mf *= i;
      term *= mf;
      double s = term;
      for (int n = 1; n < 60; ++n) {
        term *= -z / static_cast<double>(m + n + 1);
        s += term;
        if (std::abs(term) < 1e-18 * std::abs(s)) break;
      }
      psi[m] = s;
    }
    return psi;
  }
  psi[0] = -std::expm1(-z) / z;
  psi[1] = (1.0 - psi[0]) / z;
  psi[2] = (1.0 - 2.0 * psi[1]) / z;
  return psi;
}

double singular_exp_moment(double z, double p) {
  if (!(p > -1.0)) throw Error(ErrorKind::unsupported_singularity, "moment exponent must exceed -1");
  if (z < 0.0) throw Error(ErrorKind::input, "exponential moment needs z >= 0");
  if (z <= 40.0) {
    // e^{-z} sum_n z^n / (n! (n + p + 1)); all terms positive.
    double term = 1.0, s = 1.0 / (p + 1.0);
    for (int n = 1; n < 400; ++n) {
      term *= z / n;
      const double add = term / (n + p + 1.0);
      s += add;
      if (add < 1e-17 * s) break;
    }
    return std::exp(-z) * s;
  }
  // y = z(1 - x): K = (1/z) int_0^z e^{-y} (1 - y/z)^p dy; the tail past
  // y = 80 is below e^{-80}.
  const double upper = std::min(z, 80.0);
  const bool touches = upper == z;
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [z, p, touches](double y, double yc) {
    double base = 1.0 - y / z;
    if (touches && yc > 0.0) base = yc / z;  // distance to y = z, exact
    return std::exp(-y) * std::pow(base, p);
  };
  return ts.integrate(f, 0.0, upper, 1e-14) / z;
}

std::array<double, 3> quadratic_coefficients(const std::array<double, 3>& x,
                                             const std::array<double, 3>& f) {
  // Newton form f0 + d1 (x - x0) + d2 (x - x0)(x - x1), expanded.
  const double d01 = (f[1] - f[0]) / (x[1] - x[0]);
  const double d12 = (f[2] - f[1]) / (x[2] - x[1]);
  const double d2 = (d12 - d01) / (x[2] - x[0]);
  std::array<double, 3> c{};
  c[0] = f[0] - d01 * x[0] + d2 * x[0] * x[1];
  c[1] = d01 - d2 * (x[0] + x[1]);
  c[2] = d2;
  return c;
}

}  // namespace parasemi
