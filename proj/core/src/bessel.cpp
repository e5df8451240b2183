#include "conemf/bessel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace conemf::bessel {

namespace {

constexpr double kOverflowArg = 705.0;

void check_domain(double a, double x)
{
    if (!(a >= 0.0)) throw std::domain_error("bessel: order must be >= 0");
    if (!(x > 0.0)) throw std::domain_error("bessel: argument must be > 0");
}

// Ascending series for I_a. All terms are positive, so there is no
// cancellation; the leading term is formed in log space to survive extreme
// order/argument combinations.
double i_series(double a, double x, bool scaled)
{
    const double log_head = a * std::log(0.5 * x) - std::lgamma(a + 1.0) - (scaled ? x : 0.0);
    double term = std::exp(log_head);
    double sum = term;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 4000; ++k) {
        term *= q / (k * (a + k));
        sum += term;
        if (term < sum * 1e-18) return sum;
    }
    throw std::runtime_error("bessel_i: series failed to converge");
}

// Asymptotic expansion of e^{-x} I_a(x) for large x; used only for the
// scaled variant when the series head would underflow.
double i_asymptotic_scaled(double a, double x)
{
    const double mu = 4.0 * a * a;
    double term = 1.0, sum = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k < 60; ++k) {
        const double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
        term *= -num / (8.0 * k * x);
        if (std::abs(term) > prev) break; // divergent tail
        prev = std::abs(term);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

// e^{x} K_a(x) = \int_0^\infty e^{-x(cosh t - 1)} cosh(a t) dt evaluated by
// the trapezoid rule. The integrand extends evenly across t=0 and is entire,
// so the rule converges spectrally; the step shrinks with sqrt(x) to track
// the narrowing of the integrand.
double k_integral_scaled(double a, double x)
{
    const double h = 0.15 / std::max(1.0, std::sqrt(x / 8.0));
    double sum = 0.5; // t = 0 contributes cosh(0) = 1, weight 1/2
    for (int k = 1; k < 100000; ++k) {
        const double t = k * h;
        const double sh = std::sinh(0.5 * t);
        const double u = a * t;
        const double log_cosh = u > 18.0 ? u - M_LN2 : std::log(std::cosh(u));
        const double expo = -2.0 * x * sh * sh + log_cosh;
        if (expo < -745.0) break;
        const double f = std::exp(expo);
        sum += f;
        if (f < sum * 1e-18 && t > 1.0) break;
    }
    return sum * h;
}

} // namespace

double bessel_i(double a, double x)
{
    check_domain(a, x);
    if (x > kOverflowArg)
        throw std::overflow_error("bessel_i: e^x overflows, use bessel_i_scaled");
    return i_series(a, x, false);
}

double bessel_i_scaled(double a, double x)
{
    check_domain(a, x);
    if (x > 80.0) return i_asymptotic_scaled(a, x);
    return i_series(a, x, true);
}

double bessel_k(double a, double x)
{
    check_domain(a, x);
    if (x > kOverflowArg)
        throw std::overflow_error("bessel_k: e^{-x} underflows, use bessel_k_scaled");
    return std::exp(-x) * k_integral_scaled(a, x);
}

double bessel_k_scaled(double a, double x)
{
    check_domain(a, x);
    return k_integral_scaled(a, x);
}

double bessel_i_deriv(double a, double x)
{
    return (a / x) * bessel_i(a, x) + bessel_i(a + 1.0, x);
}

double bessel_k_deriv(double a, double x)
{
    return (a / x) * bessel_k(a, x) - bessel_k(a + 1.0, x);
}

} // namespace conemf::bessel
