#pragma once

namespace conemf::bessel {

/// Modified Bessel function of the first kind, I_a(x), for order a >= 0 and
/// x > 0. Throws std::overflow_error once e^x overflows; use the scaled
/// variant there.
double bessel_i(double a, double x);

/// Modified Bessel function of the second kind, K_a(x), same domain and
/// overflow contract as bessel_i (K underflows where I overflows).
double bessel_k(double a, double x);

/// e^{-x} I_a(x), finite for all x > 0.
double bessel_i_scaled(double a, double x);

/// e^{+x} K_a(x), finite for all x > 0.
double bessel_k_scaled(double a, double x);

/// I_a'(x) = (a/x) I_a(x) + I_{a+1}(x).
double bessel_i_deriv(double a, double x);

/// K_a'(x) = (a/x) K_a(x) - K_{a+1}(x).
double bessel_k_deriv(double a, double x);

} // namespace conemf::bessel
