#pragma once

#include <stdexcept>

namespace conemf {

/// Sign of the constant sectional curvature of the model space.
enum class Curvature : int {
    hyperbolic = -1,
    flat = 0,
    spherical = +1,
};

inline int kappa_value(Curvature k) { return static_cast<int>(k); }

inline Curvature curvature_from_int(int k)
{
    switch (k) {
        case -1: return Curvature::hyperbolic;
        case 0: return Curvature::flat;
        case 1: return Curvature::spherical;
        default: throw std::domain_error("curvature must be -1, 0 or +1");
    }
}

/// Generalized sine: solution of f'' + kappa f = 0 with f(0)=0, f'(0)=1.
double sn(Curvature kappa, double r);

/// Generalized cosine: solution of f'' + kappa f = 0 with f(0)=1, f'(0)=0.
double cs(Curvature kappa, double r);

/// d/dr sn = cs, d/dr cs = -kappa sn.
double sn_deriv(Curvature kappa, double r);
double cs_deriv(Curvature kappa, double r);

} // namespace conemf
