#pragma once

#include "conemf/curvature.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace conemf {

/// A coordinate chart for one of the model metrics, with the singular locus
/// excluded from the coordinate box.
///
/// Edge charts use cylindrical coordinates (rho, theta, y) with metric
/// diag(1, sn_k^2 rho, cs_k^2 rho); vertex-cone charts use (r, s, theta)
/// with metric diag(1, sn_k^2 r, sn_k^2 r sin^2 s); space-form boxes are
/// Cartesian with the identity metric (kappa = 0 only).
struct ModelChart {
    enum class Kind { edge_neighborhood, vertex_cone, space_form_box };

    Kind kind = Kind::space_form_box;
    Curvature kappa = Curvature::flat;
    double angle = 0.0; // theta period for edge/vertex charts
    std::array<std::pair<double, double>, 3> box{};
    std::array<std::string, 3> coord_names{};

    /// Metric tensor at an interior point. Throws std::domain_error if the
    /// point touches the singular locus (rho <= 0 resp. r <= 0, s <= 0).
    Eigen::Matrix3d metric(const Eigen::Vector3d& x) const;

    /// Orthonormal coframe E with E^T E = metric (diagonal for all charts).
    Eigen::Matrix3d coframe(const Eigen::Vector3d& x) const;

    bool contains(const Eigen::Vector3d& x) const;

    /// Tensor-product sample grid; the first (radial) axis may be log-spaced.
    std::array<std::vector<double>, 3> sample_grid(int n_radial, int n_other,
                                                   bool log_radial = true) const;
};

/// Chart around an interior edge point: d rho^2 + sn^2 rho d theta^2 + cs^2 rho dy^2.
/// Requires angle in (0, 2*pi].
ModelChart edge_metric(Curvature kappa, double angle);

/// Chart near one cone point of the link of a singular vertex:
/// dr^2 + sn_k^2 r (ds^2 + sin^2 s d theta^2). `link_index` selects which
/// cone point of the link the chart is centred on; every angle must lie in
/// (0, 2*pi).
ModelChart vertex_metric(Curvature kappa, const std::vector<double>& link_angles,
                         std::size_t link_index);

/// Flat Cartesian box (identity metric).
ModelChart flat_box(double half_width = 1.0);

} // namespace conemf
