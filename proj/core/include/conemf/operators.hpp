#pragma once

#include "conemf/tensor_field.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace conemf::tensor {

// Sign conventions, fixed repo-wide: Laplacians are positive (Delta_0 =
// nabla* nabla on functions), (delta k)_i = -nabla^j k_ji, and the round
// unit sphere has Ric = (n-1) g. Operator constants below are consequences
// of these choices and are measured, not assumed, by the identity suite.

/// B(k) = delta k + 1/2 d tr k; symmetric 2-tensors to 1-forms.
TenFn bianchi_B(const MetricFn& g, const TenFn& k, double h);

/// delta* omega = symmetrized nabla omega; the adjoint of delta.
TenFn delta_star(const MetricFn& g, const TenFn& omega, double h);

/// Rough Laplacian nabla* nabla on a rank-r covariant field.
TenFn rough_laplacian(const MetricFn& g, const TenFn& T, int rank, double h);

/// L k = nabla* nabla k - 2 Rk (curvature action via the chart curvature).
TenFn L_apply(const MetricFn& g, const TenFn& k, double h);

/// P omega = nabla* nabla omega - Ric(omega); acts on 1-forms.
TenFn P_apply(const MetricFn& g, const TenFn& omega, double h);

/// Linearized Einstein operator DE(k) = d/dt Ric(g + t k) - (n-1) kappa k,
/// evaluated by a central difference in t (independent of the L/B route).
TenFn DE_apply(const MetricFn& g, const TenFn& k, int kappa, double h,
               double t_lin = 1e-3);

/// Exterior derivative of a 1-form (pure partials) and codifferentials.
TenFn d_oneform(const TenFn& omega, double h);
TenFn codiff_twoform(const MetricFn& g, const TenFn& beta, double h);
TenFn d_scalar(const TenFn& f, double h);
TenFn codiff_oneform(const MetricFn& g, const TenFn& omega, double h);
TenFn trace_field(const MetricFn& g, const TenFn& k);
TenFn scalar_laplacian(const MetricFn& g, const TenFn& f, double h);

/// Covariant exterior derivative on T*M-valued forms (bundle index first).
TenFn dnabla_bundle0(const MetricFn& g, const TenFn& phi, double h);  // rank1 -> rank2
TenFn dnabla_bundle1(const MetricFn& g, const TenFn& hfield, double h); // rank2 -> rank3
TenFn deltanabla_bundle1(const MetricFn& g, const TenFn& hfield, double h); // rank2 -> rank1
TenFn deltanabla_bundle2(const MetricFn& g, const TenFn& om, double h);     // rank3 -> rank2

struct OperatorResidualReport {
    std::string identity_id;
    std::string description;
    double max_residual = 0.0;        // at the smallest step
    std::vector<double> steps;        // grid steps tested, descending
    double order = 0.0;               // observed convergence order
    double measured_constant = 0.0;   // identity (g) only: trace constant c
    bool has_constant = false;
};

/// Verifies the operator identities by finite differences on random
/// trigonometric-polynomial fields:
///   (a) P = 2 B delta*
///   (b) DE = 1/2 L - delta* B
///   (c) delta d + d delta = nabla* nabla + Ric on 1-forms
///   (d) nabla* nabla h = (delta^n d^n + d^n delta^n) h + kappa((tr h) g - 3h)
///   (e) nabla omega = delta* omega + 1/2 d omega
///   (f) (d^n)^2 omega equals the constant-curvature action
///   (g) tr(L k) = (Delta_0 + c kappa) tr k, c measured and reported
std::vector<OperatorResidualReport> identity_suite(const ModelChart& chart, int trials,
                                                   std::uint64_t seed);

std::string identity_suite_csv(const std::vector<OperatorResidualReport>& reports);

} // namespace conemf::tensor
