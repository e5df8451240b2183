#pragma once

#include "conemf/tensor_field.hpp"

#include <string>

namespace conemf::tensor {

enum class DeformationKind { length, twist, angle };

DeformationKind deformation_from_name(const std::string& name);
std::string deformation_name(DeformationKind k);

/// The standard-form deformation tensor on an edge chart: length changes
/// give cs^2(rho) f'(y) dy^2, twists sn^2(rho) f'(y) dy dtheta, and angle
/// changes sn^2(rho) dtheta^2, with a fixed smooth bump profile f'.
ChartTensorField deformation_basis(Curvature kappa, DeformationKind kind);

struct L2Classification {
    double tensor_exponent = 0.0;     // |T| ~ rho^p
    double derivative_exponent = 0.0; // |nabla T| ~ rho^p'
    bool tensor_in_l2 = false;
    bool derivative_in_l2 = false;
};

/// Leading exponents of the orthonormal-frame norms at the singular axis,
/// fitted on a log grid over the two innermost decades; membership uses
/// 2p + (transverse dim - 1) > -1 with the borderline case classified as
/// not in L^2. Throws std::runtime_error when the fit is not power-law
/// (regression R^2 < 0.999).
L2Classification l2_classify(const ChartTensorField& field);

} // namespace conemf::tensor
