#include "conemf/chart.hpp"

#include <cmath>

namespace conemf {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Eigen::Matrix3d ModelChart::metric(const Eigen::Vector3d& x) const
{
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
    switch (kind) {
        case Kind::space_form_box:
            g.setIdentity();
            return g;
        case Kind::edge_neighborhood: {
            const double rho = x[0];
            if (rho <= 0.0)
                throw std::domain_error("edge chart: rho must be positive");
            const double s = sn(kappa, rho);
            const double c = cs(kappa, rho);
            g(0, 0) = 1.0;
            g(1, 1) = s * s;
            g(2, 2) = c * c;
            return g;
        }
        case Kind::vertex_cone: {
            const double r = x[0];
            const double s = x[1];
            if (r <= 0.0)
                throw std::domain_error("vertex chart: r must be positive");
            if (s <= 0.0 || s >= kPi)
                throw std::domain_error("vertex chart: s must lie in (0, pi)");
            const double sr = sn(kappa, r);
            g(0, 0) = 1.0;
            g(1, 1) = sr * sr;
            g(2, 2) = sr * sr * std::sin(s) * std::sin(s);
            return g;
        }
    }
    throw std::logic_error("invalid chart kind");
}

Eigen::Matrix3d ModelChart::coframe(const Eigen::Vector3d& x) const
{
    const Eigen::Matrix3d g = metric(x);
    Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) e(i, i) = std::sqrt(g(i, i));
    return e;
}

bool ModelChart::contains(const Eigen::Vector3d& x) const
{
    for (int i = 0; i < 3; ++i)
        if (x[i] < box[i].first || x[i] > box[i].second) return false;
    return true;
}

std::array<std::vector<double>, 3> ModelChart::sample_grid(int n_radial, int n_other,
                                                           bool log_radial) const
{
    std::array<std::vector<double>, 3> grid;
    const bool has_radial = kind != Kind::space_form_box;
    for (int axis = 0; axis < 3; ++axis) {
        const auto [lo, hi] = box[axis];
        const int n = (axis == 0 && has_radial) ? n_radial : n_other;
        std::vector<double>& nodes = grid[axis];
        nodes.reserve(n);
        if (axis == 0 && has_radial && log_radial) {
            const double llo = std::log(lo), lhi = std::log(hi);
            for (int i = 0; i < n; ++i)
                nodes.push_back(std::exp(llo + (lhi - llo) * i / double(n - 1)));
        } else {
            for (int i = 0; i < n; ++i)
                nodes.push_back(lo + (hi - lo) * i / double(n - 1));
        }
    }
    return grid;
}

ModelChart edge_metric(Curvature kappa, double angle)
{
    if (!(angle > 0.0) || angle > 2.0 * kPi)
        throw std::domain_error("edge chart: angle must lie in (0, 2*pi]");
    ModelChart c;
    c.kind = ModelChart::Kind::edge_neighborhood;
    c.kappa = kappa;
    c.angle = angle;
    c.box = {{{1e-4, 1.2}, {0.05 * angle, 0.95 * angle}, {-1.0, 1.0}}};
    c.coord_names = {"rho", "theta", "y"};
    return c;
}

ModelChart vertex_metric(Curvature kappa, const std::vector<double>& link_angles,
                         std::size_t link_index)
{
    if (link_index >= link_angles.size())
        throw std::domain_error("vertex chart: link index out of range");
    for (double a : link_angles)
        if (!(a > 0.0) || !(a < 2.0 * kPi))
            throw std::domain_error("vertex chart: link angles must lie in (0, 2*pi)");
    const double angle = link_angles[link_index];
    ModelChart c;
    c.kind = ModelChart::Kind::vertex_cone;
    c.kappa = kappa;
    c.angle = angle;
    const double rmax = kappa == Curvature::spherical ? 0.45 * kPi : 1.2;
    c.box = {{{1e-4, rmax}, {0.1, 0.8}, {0.05 * angle, 0.95 * angle}}};
    c.coord_names = {"r", "s", "theta"};
    return c;
}

ModelChart flat_box(double half_width)
{
    ModelChart c;
    c.kind = ModelChart::Kind::space_form_box;
    c.kappa = Curvature::flat;
    c.box = {{{-half_width, half_width}, {-half_width, half_width}, {-half_width, half_width}}};
    c.coord_names = {"x1", "x2", "x3"};
    return c;
}

} // namespace conemf
