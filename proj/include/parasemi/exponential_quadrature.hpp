#pragma once

#include <array>

namespace parasemi {

/// psi_m(z) = int_0^1 x^m e^{-z(1-x)} dx for m = 0, 1, 2 and z >= 0.
std::array<double, 3> exp_moments(double z);

/// K(z, p) = int_0^1 e^{-z(1-x)} x^p dx for p > -1 and z >= 0.
double singular_exp_moment(double z, double p);

/// Monomial coefficients of the quadratic through (x_i, f_i), i = 0..2.
std::array<double, 3> quadratic_coefficients(const std::array<double, 3>& x,
                                             const std::array<double, 3>& f);

}  // namespace parasemi
