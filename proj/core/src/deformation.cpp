#include "conemf/deformation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace conemf::tensor {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Fixed smooth bump profile f'(y); nonzero value and slope at y = 0.25.
double bump_fprime(double y) { return std::exp(-4.0 * y * y); }

} // namespace

DeformationKind deformation_from_name(const std::string& name)
{
    if (name == "length") return DeformationKind::length;
    if (name == "twist") return DeformationKind::twist;
    if (name == "angle") return DeformationKind::angle;
    throw std::invalid_argument("unknown deformation kind '" + name + "'");
}

std::string deformation_name(DeformationKind k)
{
    switch (k) {
        case DeformationKind::length: return "length";
        case DeformationKind::twist: return "twist";
        case DeformationKind::angle: return "angle";
    }
    return "?";
}

ChartTensorField deformation_basis(Curvature kappa, DeformationKind kind)
{
    ChartTensorField field;
    field.chart = edge_metric(kappa, kPi);
    field.rank = 2;
    field.provenance = "standard-form " + deformation_name(kind) + " deformation";
    field.fn = [kappa, kind](const Vec3& x) {
        const double rho = x[0], y = x[2];
        const double s = sn(kappa, rho), c = cs(kappa, rho);
        Ten t(2);
        switch (kind) {
            case DeformationKind::length: t.at(2, 2) = c * c * bump_fprime(y); break;
            case DeformationKind::twist:
                t.at(2, 1) = t.at(1, 2) = 0.5 * s * s * bump_fprime(y);
                break;
            case DeformationKind::angle: t.at(1, 1) = s * s; break;
        }
        return t;
    };
    return field;
}

namespace {

struct FitResult {
    double slope;
    double r2;
    double max_value;
};

FitResult fit_exponent(const std::vector<double>& log_rho, const std::vector<double>& log_v,
                       double max_value)
{
    const std::size_t n = log_rho.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += log_rho[i];
        sy += log_v[i];
        sxx += log_rho[i] * log_rho[i];
        sxy += log_rho[i] * log_v[i];
        syy += log_v[i] * log_v[i];
    }
    const double dn = double(n);
    const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / dn;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / dn;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = slope * log_rho[i] + intercept;
        ss_res += (log_v[i] - pred) * (log_v[i] - pred);
        ss_tot += (log_v[i] - mean) * (log_v[i] - mean);
    }
    const double r2 = ss_tot < 1e-20 ? 1.0 : 1.0 - ss_res / ss_tot;
    return {slope, r2, max_value};
}

} // namespace

L2Classification l2_classify(const ChartTensorField& field)
{
    const ModelChart& chart = field.chart;
    const bool is_vertex = chart.kind == ModelChart::Kind::vertex_cone;
    if (chart.kind == ModelChart::Kind::space_form_box)
        throw std::domain_error("l2_classify: needs an edge or vertex chart");
    const int transverse_dim = is_vertex ? 3 : 2;

    const MetricFn g = [&chart](const Vec3& p) { return chart.metric(p); };

    // probe location away from symmetry zeros of the profile
    const double c1 = is_vertex ? 0.4 : 0.5 * chart.angle;
    const double c2 = is_vertex ? 0.5 * chart.angle : 0.25;

    std::vector<double> lr, lv, ldv;
    double vmax = 0.0, dvmax = 0.0;
    const int npts = 33;
    for (int i = 0; i < npts; ++i) {
        const double rho = 1e-4 * std::pow(100.0, double(i) / (npts - 1));
        const Vec3 x(rho, c1, c2);
        const Eigen::Matrix3d gx = chart.metric(x);

        const double tv = frame_norm(gx, field.fn(x));
        // radial step scales with rho so stencils stay inside the cone
        const double h = 1e-3 * rho;
        const TenFn grad = covariant_derivative(g, field.fn, field.rank, h);
        const double dv = frame_norm(gx, grad(x));

        lr.push_back(std::log(rho));
        lv.push_back(std::log(std::max(tv, 1e-300)));
        ldv.push_back(std::log(std::max(dv, 1e-300)));
        vmax = std::max(vmax, tv);
        dvmax = std::max(dvmax, dv);
    }

    L2Classification out;
    const double inf = std::numeric_limits<double>::infinity();
    auto member = [transverse_dim](double p) {
        return 2.0 * p + double(transverse_dim - 1) > -1.0 + 1e-9;
    };

    if (vmax < 1e-280) { // zero field
        out.tensor_exponent = inf;
        out.derivative_exponent = inf;
        out.tensor_in_l2 = true;
        out.derivative_in_l2 = true;
        return out;
    }

    const FitResult ft = fit_exponent(lr, lv, vmax);
    if (ft.r2 < 0.999)
        throw std::runtime_error("l2_classify: tensor norm is not power-law near the axis");
    out.tensor_exponent = ft.slope;
    out.tensor_in_l2 = member(ft.slope);

    if (dvmax < 1e-280) {
        out.derivative_exponent = inf;
        out.derivative_in_l2 = true;
        return out;
    }
    const FitResult fd = fit_exponent(lr, ldv, dvmax);
    if (fd.r2 < 0.999)
        throw std::runtime_error(
            "l2_classify: derivative norm is not power-law near the axis");
    out.derivative_exponent = fd.slope;
    out.derivative_in_l2 = member(fd.slope);
    return out;
}

} // namespace conemf::tensor
