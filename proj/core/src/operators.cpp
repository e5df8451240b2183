#include "conemf/operators.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace conemf::tensor {

namespace {

Ten transpose2(const Ten& t)
{
    Ten out(2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.at(i, j) = t.at(j, i);
    return out;
}

} // namespace

TenFn delta_star(const MetricFn& g, const TenFn& omega, double h)
{
    const TenFn grad = covariant_derivative(g, omega, 1, h);
    return [grad](const Vec3& x) {
        const Ten n = grad(x);
        Ten out(2);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out.at(i, j) = 0.5 * (n.at(i, j) + n.at(j, i));
        return out;
    };
}

TenFn trace_field(const MetricFn& g, const TenFn& k)
{
    return [g, k](const Vec3& x) {
        const Eigen::Matrix3d ginv = g(x).inverse();
        const Ten kx = k(x);
        Ten out(0);
        double tr = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) tr += ginv(i, j) * kx.at(i, j);
        out.at(0) = tr;
        return out;
    };
}

TenFn d_scalar(const TenFn& f, double h)
{
    return [f, h](const Vec3& x) {
        Ten out(1);
        for (int d = 0; d < 3; ++d) {
            Vec3 xp = x, xm = x;
            xp[d] += h;
            xm[d] -= h;
            out.at(d) = (f(xp).at(0) - f(xm).at(0)) / (2.0 * h);
        }
        return out;
    };
}

TenFn codiff_oneform(const MetricFn& g, const TenFn& omega, double h)
{
    const TenFn grad = covariant_derivative(g, omega, 1, h);
    return [g, grad](const Vec3& x) {
        const Eigen::Matrix3d ginv = g(x).inverse();
        const Ten n = grad(x);
        Ten out(0);
        double v = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) v -= ginv(a, b) * n.at(a, b);
        out.at(0) = v;
        return out;
    };
}

TenFn bianchi_B(const MetricFn& g, const TenFn& k, double h)
{
    const TenFn grad = covariant_derivative(g, k, 2, h);
    const TenFn dtr = d_scalar(trace_field(g, k), h);
    return [g, grad, dtr](const Vec3& x) {
        const Eigen::Matrix3d ginv = g(x).inverse();
        const Ten n = grad(x); // (a, j, i) = nabla_a k_{ji}
        const Ten dt = dtr(x);
        Ten out(1);
        for (int i = 0; i < 3; ++i) {
            double delta_k = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int j = 0; j < 3; ++j) delta_k -= ginv(a, j) * n.at(a, j, i);
            out.at(i) = delta_k + 0.5 * dt.at(i);
        }
        return out;
    };
}

TenFn rough_laplacian(const MetricFn& g, const TenFn& T, int rank, double h)
{
    if (rank > 2)
        throw std::domain_error("rough_laplacian: fields of rank <= 2 only");
    const TenFn grad = covariant_derivative(g, T, rank, h);
    const TenFn grad2 = covariant_derivative(g, grad, rank + 1, h);
    return [g, grad2, rank](const Vec3& x) {
        const Eigen::Matrix3d ginv = g(x).inverse();
        const Ten n2 = grad2(x); // (a, b, i1..ir)
        Ten out(rank);
        std::array<int, 4> rest{0, 0, 0, 0};
        const int block = rank == 0 ? 1 : (rank == 1 ? 3 : 9);
        for (int f = 0; f < block; ++f) {
            int tmp = f;
            for (int p = rank - 1; p >= 0; --p) {
                rest[std::size_t(p)] = tmp % 3;
                tmp /= 3;
            }
            double v = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    v -= ginv(a, b) * n2.at(a, b, rank > 0 ? rest[0] : 0,
                                            rank > 1 ? rest[1] : 0);
            out.at(rank > 0 ? rest[0] : 0, rank > 1 ? rest[1] : 0) = v;
        }
        return out;
    };
}

TenFn scalar_laplacian(const MetricFn& g, const TenFn& f, double h)
{
    return rough_laplacian(g, f, 0, h);
}

TenFn L_apply(const MetricFn& g, const TenFn& k, double h)
{
    const TenFn rough = rough_laplacian(g, k, 2, h);
    return [g, rough, k, h](const Vec3& x) {
        const Ten riem = curvature_tensor(g, x, h);
        const Eigen::Matrix3d ginv = g(x).inverse();
        const Ten kx = k(x);
        Ten out = rough(x);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double act = 0.0; // (Rk)_ij = R_ipjq k^{pq}
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q) {
                        double kup = 0.0;
                        for (int a = 0; a < 3; ++a)
                            for (int b = 0; b < 3; ++b)
                                kup += ginv(p, a) * ginv(q, b) * kx.at(a, b);
                        act += riem.at(i, p, j, q) * kup;
                    }
                out.at(i, j) -= 2.0 * act;
            }
        return out;
    };
}

TenFn P_apply(const MetricFn& g, const TenFn& omega, double h)
{
    const TenFn rough = rough_laplacian(g, omega, 1, h);
    return [g, rough, omega, h](const Vec3& x) {
        const Eigen::Matrix3d ric = ricci(g, x, h);
        const Eigen::Matrix3d ginv = g(x).inverse();
        const Ten om = omega(x);
        Ten out = rough(x);
        for (int i = 0; i < 3; ++i) {
            double v = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) v += ric(i, a) * ginv(a, b) * om.at(b);
            out.at(i) -= v;
        }
        return out;
    };
}

TenFn DE_apply(const MetricFn& g, const TenFn& k, int kappa, double h, double t_lin)
{
    return [g, k, kappa, h, t_lin](const Vec3& x) {
        auto perturbed = [g, k](double t) {
            return [g, k, t](const Vec3& p) -> Eigen::Matrix3d {
                return g(p) + t * to_matrix(k(p));
            };
        };
        const Eigen::Matrix3d dric =
            (ricci(perturbed(t_lin), x, h) - ricci(perturbed(-t_lin), x, h)) /
            (2.0 * t_lin);
        Ten out = from_matrix(dric);
        const Ten kx = k(x);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out.at(i, j) -= 2.0 * kappa * kx.at(i, j);
        return out;
    };
}

TenFn d_oneform(const TenFn& omega, double h)
{
    return [omega, h](const Vec3& x) {
        std::array<Ten, 3> d;
        for (int a = 0; a < 3; ++a) {
            Vec3 xp = x, xm = x;
            xp[a] += h;
            xm[a] -= h;
            Ten diff = omega(xp);
            diff -= omega(xm);
            diff *= 1.0 / (2.0 * h);
            d[std::size_t(a)] = diff;
        }
        Ten out(2);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                out.at(a, b) = d[std::size_t(a)].at(b) - d[std::size_t(b)].at(a);
        return out;
    };
}

TenFn codiff_twoform(const MetricFn& g, const TenFn& beta, double h)
{
    const TenFn grad = covariant_derivative(g, beta, 2, h);
    return [g, grad](const Vec3& x) {
        const Eigen::Matrix3d ginv = g(x).inverse();
        const Ten n = grad(x); // (c, a, b)
        Ten out(1);
        for (int b = 0; b < 3; ++b) {
            double v = 0.0;
            for (int c = 0; c < 3; ++c)
                for (int a = 0; a < 3; ++a) v -= ginv(c, a) * n.at(c, a, b);
            out.at(b) = v;
        }
        return out;
    };
}

TenFn dnabla_bundle0(const MetricFn& g, const TenFn& phi, double h)
{
    const TenFn grad = covariant_derivative(g, phi, 1, h);
    return [grad](const Vec3& x) {
        const Ten n = grad(x); // (b, i)
        Ten out(2);            // (i, b)
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 3; ++b) out.at(i, b) = n.at(b, i);
        return out;
    };
}

TenFn dnabla_bundle1(const MetricFn& g, const TenFn& hfield, double h)
{
    const TenFn grad = covariant_derivative(g, hfield, 2, h);
    return [grad](const Vec3& x) {
        const Ten n = grad(x); // (c, i, a) = nabla_c h_{ia}
        Ten out(3);            // (i, a, b)
        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) out.at(i, a, b) = n.at(a, i, b) - n.at(b, i, a);
        return out;
    };
}

TenFn deltanabla_bundle1(const MetricFn& g, const TenFn& hfield, double h)
{
    const TenFn grad = covariant_derivative(g, hfield, 2, h);
    return [g, grad](const Vec3& x) {
        const Eigen::Matrix3d ginv = g(x).inverse();
        const Ten n = grad(x); // (c, i, a)
        Ten out(1);
        for (int i = 0; i < 3; ++i) {
            double v = 0.0;
            for (int c = 0; c < 3; ++c)
                for (int a = 0; a < 3; ++a) v -= ginv(c, a) * n.at(c, i, a);
            out.at(i) = v;
        }
        return out;
    };
}

TenFn deltanabla_bundle2(const MetricFn& g, const TenFn& om, double h)
{
    const TenFn grad = covariant_derivative(g, om, 3, h);
    return [g, grad](const Vec3& x) {
        const Eigen::Matrix3d ginv = g(x).inverse();
        const Ten n = grad(x); // (c, i, a, b)
        Ten out(2);            // (i, b)
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 3; ++b) {
                double v = 0.0;
                for (int c = 0; c < 3; ++c)
                    for (int a = 0; a < 3; ++a) v -= ginv(c, a) * n.at(c, i, a, b);
                out.at(i, b) = v;
            }
        return out;
    };
}

// --- identity suite ----------------------------------------------------------

namespace {

// Random trigonometric polynomial with integer frequencies <= 3 per
// coordinate; high frequencies are damped to keep fourth derivatives small
// enough for the h^2 stencils to resolve.
struct TrigPoly {
    struct Term {
        double amp;
        std::array<int, 3> freq;
        std::array<int, 3> phase; // 0: sin, 1: cos
        std::array<double, 3> shift;
    };
    std::vector<Term> terms;

    double operator()(const Vec3& x) const
    {
        double v = 0.0;
        for (const auto& t : terms) {
            double p = t.amp;
            for (int d = 0; d < 3; ++d) {
                const double arg = t.freq[std::size_t(d)] * x[d] + t.shift[std::size_t(d)];
                p *= t.phase[std::size_t(d)] ? std::cos(arg) : std::sin(arg);
            }
            v += p;
        }
        return v;
    }
};

TrigPoly random_poly(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> freq(0, 3), phase(0, 1);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), shift(0.0, 6.28);
    TrigPoly poly;
    for (int t = 0; t < 3; ++t) {
        TrigPoly::Term term;
        int fsum2 = 0;
        for (int d = 0; d < 3; ++d) {
            term.freq[std::size_t(d)] = freq(rng);
            term.phase[std::size_t(d)] = phase(rng);
            term.shift[std::size_t(d)] = shift(rng);
            fsum2 += term.freq[std::size_t(d)] * term.freq[std::size_t(d)];
        }
        term.amp = 0.02 * amp(rng) / (1.0 + double(fsum2) * double(fsum2));
        poly.terms.push_back(term);
    }
    return poly;
}

TenFn random_oneform(std::mt19937_64& rng)
{
    auto c0 = random_poly(rng), c1 = random_poly(rng), c2 = random_poly(rng);
    return [c0, c1, c2](const Vec3& x) {
        Ten t(1);
        t.at(0) = c0(x);
        t.at(1) = c1(x);
        t.at(2) = c2(x);
        return t;
    };
}

TenFn random_sym2(std::mt19937_64& rng)
{
    std::array<TrigPoly, 6> c{random_poly(rng), random_poly(rng), random_poly(rng),
                              random_poly(rng), random_poly(rng), random_poly(rng)};
    return [c](const Vec3& x) {
        Ten t(2);
        const int pairs[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
        for (int p = 0; p < 6; ++p) {
            const double v = c[std::size_t(p)](x);
            t.at(pairs[p][0], pairs[p][1]) = v;
            t.at(pairs[p][1], pairs[p][0]) = v;
        }
        return t;
    };
}

std::vector<Vec3> probe_points(const ModelChart& chart, std::mt19937_64& rng, int count)
{
    std::vector<Vec3> pts;
    std::uniform_real_distribution<double> u(0.25, 0.75);
    for (int i = 0; i < count; ++i) {
        Vec3 p;
        for (int d = 0; d < 3; ++d) {
            const auto [lo, hi] = chart.box[std::size_t(d)];
            p[d] = lo + (hi - lo) * u(rng);
        }
        pts.push_back(p);
    }
    return pts;
}

struct IdentityResidual {
    std::string id;
    std::string description;
    // evaluates the identity residual at one point for one step
    std::function<double(const MetricFn&, int, const TenFn& omega, const TenFn& k,
                         const Vec3&, double)> eval;
};

double curvature_action_residual(const MetricFn& g, int kappa, const TenFn& omega,
                                 const Vec3& x, double h)
{
    const TenFn d1 = dnabla_bundle0(g, omega, h);
    const TenFn d2 = dnabla_bundle1(g, d1, h);
    const Ten lhs = d2(x);
    const Ten om = omega(x);
    const Eigen::Matrix3d gx = g(x);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double target =
                    kappa * (gx(a, i) * om.at(b) - gx(b, i) * om.at(a));
                worst = std::max(worst, std::abs(lhs.at(i, a, b) - target));
            }
    return worst;
}

} // namespace

std::vector<OperatorResidualReport> identity_suite(const ModelChart& chart, int trials,
                                                   std::uint64_t seed)
{
    if (trials < 1) throw std::domain_error("identity_suite: trials must be >= 1");
    const MetricFn g = [chart](const Vec3& x) { return chart.metric(x); };
    const int kappa = kappa_value(chart.kappa);

    std::vector<IdentityResidual> identities;
    identities.push_back(
        {"a", "P = 2 B delta*",
         [](const MetricFn& gm, int, const TenFn& omega, const TenFn&, const Vec3& x,
            double h) {
             const Ten lhs = P_apply(gm, omega, h)(x);
             const Ten rhs = bianchi_B(gm, delta_star(gm, omega, h), h)(x);
             Ten diff = lhs;
             diff -= 2.0 * rhs;
             return diff.max_abs();
         }});
    identities.push_back(
        {"b", "DE = 1/2 L - delta* B",
         [](const MetricFn& gm, int kap, const TenFn&, const TenFn& k, const Vec3& x,
            double h) {
             const Ten lhs = DE_apply(gm, k, kap, h)(x);
             Ten rhs = 0.5 * L_apply(gm, k, h)(x);
             rhs -= delta_star(gm, bianchi_B(gm, k, h), h)(x);
             Ten diff = lhs;
             diff -= rhs;
             return diff.max_abs();
         }});
    identities.push_back(
        {"c", "delta d + d delta = nabla* nabla + Ric",
         [](const MetricFn& gm, int, const TenFn& omega, const TenFn&, const Vec3& x,
            double h) {
             Ten lhs = codiff_twoform(gm, d_oneform(omega, h), h)(x);
             lhs += d_scalar(codiff_oneform(gm, omega, h), h)(x);
             Ten rhs = rough_laplacian(gm, omega, 1, h)(x);
             const Eigen::Matrix3d ric = ricci(gm, x, h);
             const Eigen::Matrix3d ginv = gm(x).inverse();
             const Ten om = omega(x);
             for (int i = 0; i < 3; ++i) {
                 double v = 0.0;
                 for (int a = 0; a < 3; ++a)
                     for (int b = 0; b < 3; ++b) v += ric(i, a) * ginv(a, b) * om.at(b);
                 rhs.at(i) += v;
             }
             Ten diff = lhs;
             diff -= rhs;
             return diff.max_abs();
         }});
    identities.push_back(
        {"d", "nabla* nabla h = (dn deltan + deltan dn) h + kappa((tr h) g - 3 h)",
         [](const MetricFn& gm, int kap, const TenFn&, const TenFn& k, const Vec3& x,
            double h) {
             const Ten lhs = rough_laplacian(gm, k, 2, h)(x);
             Ten rhs = deltanabla_bundle2(gm, dnabla_bundle1(gm, k, h), h)(x);
             rhs += dnabla_bundle0(gm, deltanabla_bundle1(gm, k, h), h)(x);
             const Eigen::Matrix3d gx = gm(x);
             const Eigen::Matrix3d ginv = gx.inverse();
             const Ten kx = k(x);
             double tr = 0.0;
             for (int i = 0; i < 3; ++i)
                 for (int j = 0; j < 3; ++j) tr += ginv(i, j) * kx.at(i, j);
             for (int i = 0; i < 3; ++i)
                 for (int j = 0; j < 3; ++j)
                     rhs.at(i, j) += kap * (tr * gx(i, j) - 3.0 * kx.at(i, j));
             Ten diff = lhs;
             diff -= rhs;
             return diff.max_abs();
         }});
    identities.push_back(
        {"e", "nabla omega = delta* omega + 1/2 d omega",
         [](const MetricFn& gm, int, const TenFn& omega, const TenFn&, const Vec3& x,
            double h) {
             const Ten grad = covariant_derivative(gm, omega, 1, h)(x);
             const Ten sym = delta_star(gm, omega, h)(x);
             const Ten asym = d_oneform(omega, h)(x);
             double worst = 0.0;
             for (int a = 0; a < 3; ++a)
                 for (int b = 0; b < 3; ++b)
                     worst = std::max(worst, std::abs(grad.at(a, b) - sym.at(a, b) -
                                                      0.5 * asym.at(a, b)));
             return worst;
         }});
    identities.push_back(
        {"f", "(d nabla)^2 equals the curvature action",
         [](const MetricFn& gm, int kap, const TenFn& omega, const TenFn&, const Vec3& x,
            double h) { return curvature_action_residual(gm, kap, omega, x, h); }});

    std::mt19937_64 rng(seed);
    std::vector<std::pair<TenFn, TenFn>> fields; // (omega, k) per trial
    for (int t = 0; t < trials; ++t)
        fields.push_back({random_oneform(rng), random_sym2(rng)});
    const std::vector<Vec3> pts = probe_points(chart, rng, 2);

    const std::vector<double> steps{4e-3, 2e-3, 1e-3};
    std::vector<OperatorResidualReport> reports;
    for (const auto& ident : identities) {
        OperatorResidualReport rep;
        rep.identity_id = ident.id;
        rep.description = ident.description;
        rep.steps = steps;
        std::vector<double> res(steps.size(), 0.0);
        for (std::size_t s = 0; s < steps.size(); ++s)
            for (const auto& [omega, k] : fields)
                for (const Vec3& x : pts)
                    res[s] = std::max(res[s], ident.eval(g, kappa, omega, k, x, steps[s]));
        rep.max_residual = res.back();
        rep.order = std::log2(std::max(res[0], 1e-300) / std::max(res[1], 1e-300));
        reports.push_back(std::move(rep));
    }

    // (g) trace of L: fit the constant c in tr(L k) = Delta_0 tr k + c kappa tr k.
    {
        OperatorResidualReport rep;
        rep.identity_id = "g";
        rep.description = "tr L = (Delta_0 + c kappa) tr";
        rep.steps = steps;
        std::vector<double> res(steps.size(), 0.0);
        double num = 0.0, den = 0.0;
        for (std::size_t s = 0; s < steps.size(); ++s) {
            for (const auto& [omega, k] : fields) {
                (void)omega;
                const TenFn trL = trace_field(g, L_apply(g, k, steps[s]));
                const TenFn lap_tr = scalar_laplacian(g, trace_field(g, k), steps[s]);
                const TenFn tr = trace_field(g, k);
                for (const Vec3& x : pts) {
                    const double lhs = trL(x).at(0) - lap_tr(x).at(0);
                    const double rhs = kappa * tr(x).at(0);
                    if (s + 1 == steps.size()) {
                        num += lhs * rhs;
                        den += rhs * rhs;
                    }
                }
            }
        }
        const double c = den > 0.0 ? num / den : 0.0;
        rep.measured_constant = c;
        rep.has_constant = kappa != 0;
        for (std::size_t s = 0; s < steps.size(); ++s) {
            for (const auto& [omega, k] : fields) {
                (void)omega;
                const TenFn trL = trace_field(g, L_apply(g, k, steps[s]));
                const TenFn lap_tr = scalar_laplacian(g, trace_field(g, k), steps[s]);
                const TenFn tr = trace_field(g, k);
                for (const Vec3& x : pts)
                    res[s] = std::max(res[s], std::abs(trL(x).at(0) - lap_tr(x).at(0) -
                                                       c * kappa * tr(x).at(0)));
            }
        }
        rep.max_residual = res.back();
        rep.order = std::log2(std::max(res[0], 1e-300) / std::max(res[1], 1e-300));
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::string identity_suite_csv(const std::vector<OperatorResidualReport>& reports)
{
    std::string csv = "identity,description,max_residual,order,measured_constant\n";
    char buf[256];
    for (const auto& r : reports) {
        if (r.has_constant)
            std::snprintf(buf, sizeof buf, "%s,\"%s\",%.17g,%.3f,%.17g\n",
                          r.identity_id.c_str(), r.description.c_str(), r.max_residual,
                          r.order, r.measured_constant);
        else
            std::snprintf(buf, sizeof buf, "%s,\"%s\",%.17g,%.3f,\n", r.identity_id.c_str(),
                          r.description.c_str(), r.max_residual, r.order);
        csv += buf;
    }
    return csv;
}

} // namespace conemf::tensor
