#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace conemf::normalop {

/// Radial quadrature grid for the measure rho d rho, log-spaced (uniform in
/// t = log rho) so the innermost decades are resolved.
struct RadialGrid {
    std::vector<double> nodes;   // strictly increasing, positive
    std::vector<double> weights; // quadrature weights for rho d rho

    static RadialGrid make_log(double rho_min = 1e-5, double rho_max = 40.0,
                               int n_nodes = 6001);
};

/// One fundamental solution of the Fourier-reduced edge normal operator.
/// Components (f, g, h) multiply (d rho, rho d theta, dy); each basis element
/// has a single radial profile per component.
struct EdgeModeSolution {
    struct RadialTerm {
        enum class Kind { none, bessel_i, bessel_k, power, logarithm };
        Kind kind = Kind::none;
        std::complex<double> coef{0.0, 0.0};
        double order_or_exponent = 0.0;
    };

    int n = 0;
    double gamma = 1.0;
    double xi = 0.0;
    std::array<std::complex<double>, 6> coefficients{}; // unit vector c^1..c^6
    std::array<RadialTerm, 3> components{};             // f, g, h profiles
    std::string family;

    bool exponential_growth = false; // I-type profile
    double exponent_at_zero = 0.0;   // leading power at rho -> 0
    bool log_at_zero = false;        // K_0 / log profile

    std::complex<double> eval(int component, double rho) const;
};

/// The six fundamental solutions of the coupled mode system for Fourier
/// index n, with xi the dual edge variable. xi = 0 reduces to the indicial
/// power solutions. Requires gamma >= 1.
std::vector<EdgeModeSolution> edge_mode_basis(int n, double gamma, double xi);

/// True iff the solution lies in rho^delta L^2(rho d rho) globally: decay at
/// infinity plus exponent mu > delta - 1 at zero (a log counts as rho^{0-}).
bool weighted_membership(const EdgeModeSolution& sol, double delta);

/// Finite-difference residual of the displayed coupled system at rho, using
/// step h_t in t = log rho; O(h^2) for true solutions.
double mode_system_residual(const EdgeModeSolution& sol, double rho, double h_t);

struct GreenResult {
    std::vector<double> u;
    double residual = 0.0;    // relative L^2 residual of the discretized solve
    double log_coeff = 0.0;   // fitted log rho coefficient on the inner decade
    double const_coeff = 0.0; // fitted constant term on the inner decade
};

/// Solves the n = 0 scalar normal equation (-(rho d_rho)^2 + rho^2 xi^2) u =
/// rho^2 f through the explicit I_0/K_0 kernel; the returned solution has no
/// log term at rho -> 0. Requires xi != 0 and f supported inside the grid.
GreenResult green_apply(const std::vector<double>& f_samples, const RadialGrid& grid,
                        double xi);

struct ScanRow {
    int n = 0;
    double xi = 0.0;
    double delta = 0.0;
    bool member = false;
    double exponent_at_zero = 0.0;
    bool log_at_zero = false;
    std::string family;
};

struct ScanVerdict {
    double delta = 0.0;
    bool injective = false;
    std::vector<ScanRow> rows; // all modes tested, members flagged
};

/// For each delta, lists the basis modes (|n| <= n_max, xi in xis) passing
/// weighted_membership; `injective` iff none do. Requires gamma > 1.
std::vector<ScanVerdict> injectivity_scan(double gamma, const std::vector<double>& deltas,
                                          int n_max, const std::vector<double>& xis);

std::string scan_csv(const std::vector<ScanVerdict>& verdicts);

} // namespace conemf::normalop
