#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conemf::indicial {

/// Location of the indicial computation.
enum class Locus { cone_scalar, cone_oneform, edge, vertex };

std::string locus_name(Locus l);

/// One fundamental solution r^mu * mode (times log r when log_solution).
struct ModeDescriptor {
    std::string polarization; // scalar, eta++, eta+-, eta-+, eta--, dy,
                              // coexact, coupled-A, coupled-B, radial-lambda0
    int fourier_n = 0;        // cone / edge loci
    double link_lambda = 0.0; // vertex locus
    bool log_solution = false;
};

struct IndicialRoot {
    double value = 0.0;
    int multiplicity = 0;
    bool has_log_partner = false;
    std::vector<ModeDescriptor> modes;
    bool endpoint = false;      // sits exactly on the inclusive window end
    bool critical_pair = false; // member of the +-(gamma-1) pair / group A-B
    std::string note;
};

/// Window (lo, hi] of exponents relevant for self-adjoint extensions.
struct CriticalWindow {
    double lo = 0.0; // exclusive
    double hi = 0.0; // inclusive
    int transverse_dim = 0;
    int measure_exponent = 0; // transverse_dim - 1

    bool contains(double mu, double tol = 1e-12) const;
    /// r^mu in L^2(r^{d-1} dr) near 0 iff mu > -d/2.
    bool in_l2(double mu) const;
};

CriticalWindow critical_window(int transverse_dim);

struct IndicialReport {
    std::string operator_tag;
    Locus locus = Locus::cone_scalar;
    double angle = 0.0;                // cone / edge loci
    std::vector<double> link_spectrum; // vertex locus
    CriticalWindow window;
    std::vector<IndicialRoot> roots;
    std::vector<IndicialRoot> friedrichs_allowed;
};

using Window = std::pair<double, double>; // (lo, hi], half-open below

/// Indicial roots of the scalar Laplacian at a 2D cone point: {n gamma},
/// gamma = 2 pi / angle, 0 a double root with log partner.
IndicialReport roots_cone_scalar(double angle, std::optional<Window> window = std::nullopt);

/// Indicial roots of the Hodge Laplacian on 1-forms at a 2D cone point:
/// {n gamma +- 1} with eta^{++-..} polarizations.
IndicialReport roots_cone_oneform(double angle, std::optional<Window> window = std::nullopt);

/// Indicial roots of nabla* nabla (= P up to curvature terms) at a 3D
/// singular edge: {n gamma, n gamma +- 1} including the dy component.
IndicialReport roots_edge(double angle, std::optional<Window> window = std::nullopt);

/// Indicial roots of nabla* nabla at a 3D singular vertex with the given
/// scalar link spectrum (first entry 0, the rest > 1). Returns the full
/// root set; roots inside (-3/2, 1/2] carry group A / group B notes.
IndicialReport roots_vertex(const std::vector<double>& link_spectrum);

/// Friedrichs-domain selection: keeps roots in the upper half of the
/// critical window, the midpoint double root without its log partner, and
/// (optionally) inclusive-endpoint roots.
IndicialReport friedrichs_filter(const IndicialReport& report,
                                 bool include_endpoints = false);

/// Sup-norm certificate over a radial grid that r^root * mode annihilates
/// the indicial operator of the locus; exact roots give <= 1e-9 after
/// scaling. `angle_or_lambda` is the cone angle for cone/edge loci and is
/// ignored for the vertex locus (the descriptor carries lambda).
double mode_residual(Locus locus, double angle_or_lambda, double root,
                     const ModeDescriptor& mode);

} // namespace conemf::indicial
