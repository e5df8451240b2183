#include <doctest.h>

#include "conemf/chart.hpp"
#include "conemf/curvature.hpp"

#include <cmath>

using namespace conemf;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("sn and cs solve the defining initial value problems")
{
    CHECK(sn(Curvature::flat, 2.5) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(cs(Curvature::hyperbolic, 0.0) == 1.0);
    CHECK(sn(Curvature::hyperbolic, 0.0) == 0.0);
    CHECK(cs(Curvature::spherical, kPi / 2.0) == doctest::Approx(0.0).scale(1.0));

    // pythagorean identity cs^2 + kappa sn^2 = 1, relative to the term size
    // (the difference of two ~cosh^2(5) doubles carries that much roundoff)
    for (Curvature k : {Curvature::hyperbolic, Curvature::flat, Curvature::spherical}) {
        for (int i = 0; i <= 100; ++i) {
            const double r = -5.0 + 0.1 * i;
            const double c = cs(k, r), s = sn(k, r);
            const double scale = std::max(1.0, c * c + std::abs(kappa_value(k)) * s * s);
            CHECK(std::abs(c * c + kappa_value(k) * s * s - 1.0) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("derivative relations by central differences, O(h^2)")
{
    for (Curvature k : {Curvature::hyperbolic, Curvature::flat, Curvature::spherical}) {
        for (double r : {-2.0, -0.3, 0.7, 4.1}) {
            double err_coarse = 0.0, err_fine = 0.0;
            for (double h : {1e-2, 5e-3}) {
                const double dsn = (sn(k, r + h) - sn(k, r - h)) / (2.0 * h);
                const double dcs = (cs(k, r + h) - cs(k, r - h)) / (2.0 * h);
                const double e = std::max(std::abs(dsn - sn_deriv(k, r)),
                                          std::abs(dcs - cs_deriv(k, r)));
                (h == 1e-2 ? err_coarse : err_fine) = e;
            }
            if (k == Curvature::flat) {
                CHECK(err_fine <= 1e-12); // exact for linear sn
            } else {
                CHECK(err_fine <= 0.3 * err_coarse); // at least ~O(h^2)
            }
        }
    }
}

TEST_CASE("edge chart metric")
{
    const ModelChart flat = edge_metric(Curvature::flat, kPi);
    const Eigen::Matrix3d g0 = flat.metric({0.7, 1.0, 0.0});
    CHECK(g0(0, 0) == 1.0);
    CHECK(g0(1, 1) == doctest::Approx(0.49).epsilon(1e-15));
    CHECK(g0(2, 2) == 1.0);

    const ModelChart hyp = edge_metric(Curvature::hyperbolic, kPi);
    const Eigen::Matrix3d g1 = hyp.metric({1.0, 1.0, 0.0});
    CHECK(g1(1, 1) == doctest::Approx(std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-15));
    CHECK(g1(2, 2) == doctest::Approx(std::cosh(1.0) * std::cosh(1.0)).epsilon(1e-15));

    CHECK_THROWS_AS(edge_metric(Curvature::flat, 3.0 * kPi), std::domain_error);
    CHECK_THROWS_AS(flat.metric({0.0, 1.0, 0.0}), std::domain_error);
}

TEST_CASE("vertex chart metric")
{
    const ModelChart sph = vertex_metric(Curvature::spherical, {kPi, kPi, kPi}, 0);
    const Eigen::Matrix3d g = sph.metric({kPi / 2.0, kPi / 2.0, 0.5});
    CHECK(g(0, 0) == 1.0);
    CHECK(g(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g(2, 2) == doctest::Approx(1.0).epsilon(1e-15));

    const ModelChart flat = vertex_metric(Curvature::flat, {kPi / 2.0, kPi, kPi}, 1);
    const Eigen::Matrix3d gf = flat.metric({0.3, 0.4, 1.0});
    CHECK(gf(1, 1) == doctest::Approx(0.09).epsilon(1e-14));
    CHECK(gf(2, 2) == doctest::Approx(0.09 * std::sin(0.4) * std::sin(0.4)).epsilon(1e-14));

    CHECK_THROWS_AS(vertex_metric(Curvature::flat, {2.0 * kPi}, 0), std::domain_error);
    CHECK_THROWS_AS(flat.metric({0.0, 0.4, 1.0}), std::domain_error);
}

TEST_CASE("metric equals coframe^T coframe on every chart")
{
    const ModelChart charts[] = {edge_metric(Curvature::hyperbolic, 1.5 * kPi),
                                 edge_metric(Curvature::spherical, 0.5 * kPi),
                                 vertex_metric(Curvature::spherical, {kPi, kPi, kPi}, 0),
                                 flat_box()};
    for (const auto& chart : charts) {
        const auto grid = chart.sample_grid(5, 4);
        for (double a : grid[0])
            for (double b : grid[1])
                for (double c : grid[2]) {
                    const Eigen::Vector3d x(a, b, c);
                    const Eigen::Matrix3d g = chart.metric(x);
                    const Eigen::Matrix3d e = chart.coframe(x);
                    CHECK((e.transpose() * e - g).norm() <= 1e-12 * g.norm());
                    // symmetric positive definite at interior samples
                    CHECK((g - g.transpose()).norm() == 0.0);
                    CHECK(g.ldlt().isPositive());
                }
    }
}
