#pragma once

#include "conemf/polyhedron.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace conemf::rig {

/// Linearizations of the constraint maps with respect to vertex velocities
/// (3 unknowns per vertex; hyperbolic velocities are coefficients in a
/// per-vertex Minkowski-orthonormal tangent basis).
struct Jacobians {
    Eigen::MatrixXd planarity; // rows only for faces with > 3 vertices
    Eigen::MatrixXd dihedral;  // one row per edge
    Eigen::MatrixXd face;      // one row per (face, corner)
};

/// Forward-mode (dual number) Jacobians.
Jacobians constraint_jacobians(const Polyhedron& poly);

/// Central-difference Jacobians, the test oracle for the forward mode.
Jacobians constraint_jacobians_fd(const Polyhedron& poly, double h = 1e-6);

/// Per-vertex Minkowski-orthonormal tangent bases (hyperbolic only); column
/// block i holds the three tangent vectors at vertex i.
std::vector<Eigen::Matrix<double, 4, 3>> tangent_bases(const Polyhedron& poly);

struct TrivialBasis {
    Eigen::MatrixXd fields;          // 3V x 6 ambient isometry generators
    Eigen::VectorXd similarity_extra; // euclidean global scaling field (3V), empty otherwise
};

TrivialBasis trivial_motion_basis(const Polyhedron& poly);

struct RigidityReport {
    enum class Verdict { pass, fail, indeterminate };

    std::vector<double> singular_values;
    int kernel_dim = 0;
    int trivial_dim = 0;
    double sigma_gap = 0.0; // smallest kept / largest dropped singular value
    double trivial_containment_residual = 0.0;
    double face_angle_inclusion_residual = 0.0; // euclidean only
    Verdict verdict = Verdict::fail;
    std::string diagnostics;
    Eigen::MatrixXd kernel; // orthonormal basis, one column per kernel vector
};

std::string verdict_name(RigidityReport::Verdict v);

/// Stoker-type rigidity check: numerical kernel of the stacked
/// [planarity; dihedral] Jacobian at relative threshold tol_rel, containment
/// of the trivial motions, and (Euclidean) the face-angle inclusion test.
/// The verdict is `indeterminate` when the singular-value gap across the
/// threshold is below 10^3.
RigidityReport rigidity_check(const Polyhedron& poly, double tol_rel = 1e-8,
                              double containment_tol = 1e-8,
                              double face_inclusion_tol = 1e-6);

std::string serialize_report(const RigidityReport& report);

} // namespace conemf::rig
