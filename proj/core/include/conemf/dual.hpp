#pragma once

#include <cmath>

namespace conemf {

/// Forward-mode dual number carrying one directional derivative.
struct Dual {
    double v = 0.0;
    double d = 0.0;

    Dual() = default;
    Dual(double value) : v(value) {}
    Dual(double value, double deriv) : v(value), d(deriv) {}
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b)
{
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

inline Dual& operator+=(Dual& a, Dual b) { return a = a + b; }
inline Dual& operator-=(Dual& a, Dual b) { return a = a - b; }
inline Dual& operator*=(Dual& a, Dual b) { return a = a * b; }

inline Dual sqrt(Dual a)
{
    const double s = std::sqrt(a.v);
    return {s, a.d / (2.0 * s)};
}

inline Dual acos(Dual a)
{
    return {std::acos(a.v), -a.d / std::sqrt(1.0 - a.v * a.v)};
}

inline double value(double x) { return x; }
inline double value(Dual x) { return x.v; }

} // namespace conemf
