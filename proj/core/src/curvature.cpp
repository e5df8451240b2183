#include "conemf/curvature.hpp"

#include <cmath>

namespace conemf {

double sn(Curvature kappa, double r)
{
    switch (kappa) {
        case Curvature::hyperbolic: return std::sinh(r);
        case Curvature::flat: return r;
        case Curvature::spherical: return std::sin(r);
    }
    throw std::domain_error("invalid curvature");
}

double cs(Curvature kappa, double r)
{
    switch (kappa) {
        case Curvature::hyperbolic: return std::cosh(r);
        case Curvature::flat: return 1.0;
        case Curvature::spherical: return std::cos(r);
    }
    throw std::domain_error("invalid curvature");
}

double sn_deriv(Curvature kappa, double r) { return cs(kappa, r); }

double cs_deriv(Curvature kappa, double r)
{
    return -kappa_value(kappa) * sn(kappa, r);
}

} // namespace conemf
