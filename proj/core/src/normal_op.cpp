#include "conemf/normal_op.hpp"

#include "conemf/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace conemf::normalop {

using cplx = std::complex<double>;

RadialGrid RadialGrid::make_log(double rho_min, double rho_max, int n_nodes)
{
    if (!(rho_min > 0.0) || !(rho_min <= 1e-4))
        throw std::domain_error("RadialGrid: rho_min must satisfy 0 < rho_min <= 1e-4");
    if (rho_max < 30.0)
        throw std::domain_error("RadialGrid: rho_max must be >= 30");
    if (n_nodes < 11 || n_nodes % 2 == 0)
        throw std::domain_error("RadialGrid: need an odd node count >= 11");

    RadialGrid g;
    const double t0 = std::log(rho_min), t1 = std::log(rho_max);
    const double dt = (t1 - t0) / (n_nodes - 1);
    g.nodes.resize(n_nodes);
    g.weights.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double rho = std::exp(t0 + i * dt);
        g.nodes[i] = rho;
        // composite Simpson in t; rho d rho = rho^2 dt
        double simpson = (i == 0 || i == n_nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        g.weights[i] = simpson * dt / 3.0 * rho * rho;
    }
    return g;
}

std::complex<double> EdgeModeSolution::eval(int component, double rho) const
{
    const RadialTerm& term = components[static_cast<std::size_t>(component)];
    using Kind = RadialTerm::Kind;
    switch (term.kind) {
        case Kind::none: return {0.0, 0.0};
        case Kind::bessel_i:
            return term.coef * bessel::bessel_i(term.order_or_exponent, rho * std::abs(xi));
        case Kind::bessel_k:
            return term.coef * bessel::bessel_k(term.order_or_exponent, rho * std::abs(xi));
        case Kind::power: return term.coef * std::pow(rho, term.order_or_exponent);
        case Kind::logarithm: return term.coef * std::log(rho);
    }
    return {0.0, 0.0};
}

namespace {

using Term = EdgeModeSolution::RadialTerm;
using Kind = Term::Kind;

EdgeModeSolution make_mode(int n, double gamma, double xi, int index, Term f, Term g,
                           Term h, std::string family)
{
    EdgeModeSolution s;
    s.n = n;
    s.gamma = gamma;
    s.xi = xi;
    s.coefficients[static_cast<std::size_t>(index)] = {1.0, 0.0};
    s.components = {f, g, h};
    s.family = std::move(family);

    const Term& lead = f.kind != Kind::none ? f : (g.kind != Kind::none ? g : h);
    switch (lead.kind) {
        case Kind::bessel_i:
            s.exponential_growth = true;
            s.exponent_at_zero = lead.order_or_exponent;
            break;
        case Kind::bessel_k:
            if (lead.order_or_exponent == 0.0) {
                s.log_at_zero = true;
                s.exponent_at_zero = 0.0;
            } else {
                s.exponent_at_zero = -lead.order_or_exponent;
            }
            break;
        case Kind::power: s.exponent_at_zero = lead.order_or_exponent; break;
        case Kind::logarithm:
            s.log_at_zero = true;
            s.exponent_at_zero = 0.0;
            break;
        case Kind::none: break;
    }
    return s;
}

std::string bessel_name(char kind, double order)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c[%g]", kind, order);
    return buf;
}

} // namespace

std::vector<EdgeModeSolution> edge_mode_basis(int n, double gamma, double xi)
{
    if (!(gamma >= 1.0))
        throw std::domain_error("edge_mode_basis: gamma must be >= 1");

    std::vector<EdgeModeSolution> basis;
    basis.reserve(6);
    const double m = std::abs(n) * gamma;
    const cplx si = n >= 0 ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
    const Term none{};

    if (xi != 0.0 && n != 0) {
        basis.push_back(make_mode(n, gamma, xi, 0, {Kind::bessel_i, 1.0, m - 1.0},
                                  {Kind::bessel_i, si, m - 1.0}, none,
                                  bessel_name('I', m - 1.0) + " pair"));
        basis.push_back(make_mode(n, gamma, xi, 1, {Kind::bessel_k, 1.0, m - 1.0},
                                  {Kind::bessel_k, si, m - 1.0}, none,
                                  bessel_name('K', m - 1.0) + " pair"));
        basis.push_back(make_mode(n, gamma, xi, 2, {Kind::bessel_i, 1.0, m + 1.0},
                                  {Kind::bessel_i, -si, m + 1.0}, none,
                                  bessel_name('I', m + 1.0) + " pair"));
        basis.push_back(make_mode(n, gamma, xi, 3, {Kind::bessel_k, 1.0, m + 1.0},
                                  {Kind::bessel_k, -si, m + 1.0}, none,
                                  bessel_name('K', m + 1.0) + " pair"));
        basis.push_back(make_mode(n, gamma, xi, 4, none, none,
                                  {Kind::bessel_i, 1.0, m}, bessel_name('I', m) + " dy"));
        basis.push_back(make_mode(n, gamma, xi, 5, none, none,
                                  {Kind::bessel_k, 1.0, m}, bessel_name('K', m) + " dy"));
        return basis;
    }

    if (xi != 0.0) { // n == 0: fully decoupled components
        basis.push_back(make_mode(0, gamma, xi, 0, {Kind::bessel_i, 1.0, 1.0}, none, none,
                                  "I[1] drho"));
        basis.push_back(make_mode(0, gamma, xi, 1, {Kind::bessel_k, 1.0, 1.0}, none, none,
                                  "K[1] drho"));
        basis.push_back(make_mode(0, gamma, xi, 2, none, {Kind::bessel_i, 1.0, 1.0}, none,
                                  "I[1] dtheta"));
        basis.push_back(make_mode(0, gamma, xi, 3, none, {Kind::bessel_k, 1.0, 1.0}, none,
                                  "K[1] dtheta"));
        basis.push_back(make_mode(0, gamma, xi, 4, none, none, {Kind::bessel_i, 1.0, 0.0},
                                  "I[0] dy"));
        basis.push_back(make_mode(0, gamma, xi, 5, none, none, {Kind::bessel_k, 1.0, 0.0},
                                  "K[0] dy"));
        return basis;
    }

    // xi == 0: indicial power (and log) solutions
    if (n != 0) {
        basis.push_back(make_mode(n, gamma, 0.0, 0, {Kind::power, 1.0, m - 1.0},
                                  {Kind::power, si, m - 1.0}, none, "rho^(m-1) pair"));
        if (m == 1.0)
            basis.push_back(make_mode(n, gamma, 0.0, 1, {Kind::logarithm, 1.0, 0.0},
                                      {Kind::logarithm, si, 0.0}, none, "log pair"));
        else
            basis.push_back(make_mode(n, gamma, 0.0, 1, {Kind::power, 1.0, 1.0 - m},
                                      {Kind::power, si, 1.0 - m}, none, "rho^(1-m) pair"));
        basis.push_back(make_mode(n, gamma, 0.0, 2, {Kind::power, 1.0, m + 1.0},
                                  {Kind::power, -si, m + 1.0}, none, "rho^(m+1) pair"));
        basis.push_back(make_mode(n, gamma, 0.0, 3, {Kind::power, 1.0, -m - 1.0},
                                  {Kind::power, -si, -m - 1.0}, none, "rho^(-m-1) pair"));
        basis.push_back(make_mode(n, gamma, 0.0, 4, none, none, {Kind::power, 1.0, m},
                                  "rho^m dy"));
        basis.push_back(make_mode(n, gamma, 0.0, 5, none, none, {Kind::power, 1.0, -m},
                                  "rho^(-m) dy"));
        return basis;
    }
    basis.push_back(make_mode(0, gamma, 0.0, 0, {Kind::power, 1.0, 1.0}, none, none,
                              "rho drho"));
    basis.push_back(make_mode(0, gamma, 0.0, 1, {Kind::power, 1.0, -1.0}, none, none,
                              "rho^-1 drho"));
    basis.push_back(make_mode(0, gamma, 0.0, 2, none, {Kind::power, 1.0, 1.0}, none,
                              "rho dtheta"));
    basis.push_back(make_mode(0, gamma, 0.0, 3, none, {Kind::power, 1.0, -1.0}, none,
                              "rho^-1 dtheta"));
    basis.push_back(make_mode(0, gamma, 0.0, 4, none, none, {Kind::power, 1.0, 0.0},
                              "const dy"));
    basis.push_back(make_mode(0, gamma, 0.0, 5, none, none, {Kind::logarithm, 1.0, 0.0},
                              "log dy"));
    return basis;
}

bool weighted_membership(const EdgeModeSolution& sol, double delta)
{
    if (sol.exponential_growth) return false;
    if (sol.xi == 0.0) return false; // powers and logs never decay at infinity
    if (sol.log_at_zero) return delta < 1.0;
    return sol.exponent_at_zero > delta - 1.0;
}

double mode_system_residual(const EdgeModeSolution& sol, double rho, double h_t)
{
    const double m2 = double(sol.n) * sol.n * sol.gamma * sol.gamma;
    const double xi2 = sol.xi * sol.xi;
    const cplx two_i_ng{0.0, 2.0 * sol.n * sol.gamma};

    // second derivative in t = log rho via a 3-point stencil at fixed rho
    auto d2 = [&](int comp) {
        const double t = std::log(rho);
        const cplx up = sol.eval(comp, std::exp(t + h_t));
        const cplx u0 = sol.eval(comp, std::exp(t));
        const cplx um = sol.eval(comp, std::exp(t - h_t));
        return (up - 2.0 * u0 + um) / (h_t * h_t);
    };

    const cplx f = sol.eval(0, rho), g = sol.eval(1, rho), h = sol.eval(2, rho);
    const cplx rf = -d2(0) + (m2 + 1.0 + rho * rho * xi2) * f + two_i_ng * g;
    const cplx rg = -d2(1) + (m2 + 1.0 + rho * rho * xi2) * g - two_i_ng * f;
    const cplx rh = -d2(2) + (m2 + rho * rho * xi2) * h;

    const double scale = (1.0 + m2 + 1.0 + rho * rho * xi2) *
                         (std::abs(f) + std::abs(g) + std::abs(h) + 1e-300);
    return (std::abs(rf) + std::abs(rg) + std::abs(rh)) / scale;
}

GreenResult green_apply(const std::vector<double>& f_samples, const RadialGrid& grid,
                        double xi)
{
    if (xi == 0.0)
        throw std::domain_error("green_apply: xi = 0 is the indicial regime");
    const std::size_t n = grid.nodes.size();
    if (f_samples.size() != n)
        throw std::domain_error("green_apply: sample count does not match grid");
    const double axi = std::abs(xi);

    std::vector<double> i0(n), k0(n);
    for (std::size_t i = 0; i < n; ++i) {
        i0[i] = bessel::bessel_i(0.0, axi * grid.nodes[i]);
        k0[i] = bessel::bessel_k(0.0, axi * grid.nodes[i]);
    }

    // u(rho) = K0(xi rho) int_0^rho I0 f rho' drho' + I0(xi rho) int_rho^inf K0 f rho' drho'
    std::vector<double> prefix(n), suffix(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += grid.weights[i] * i0[i] * f_samples[i];
        prefix[i] = acc;
    }
    acc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        acc += grid.weights[i] * k0[i] * f_samples[i];
        suffix[i] = acc;
    }

    GreenResult res;
    res.u.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        res.u[i] = k0[i] * prefix[i] + (suffix[i] == 0.0 ? 0.0 : i0[i] * suffix[i]);

    // residual of the discretized operator applied to u
    const double dt = std::log(grid.nodes[1] / grid.nodes[0]);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double d2t = (-res.u[i - 2] + 16.0 * res.u[i - 1] - 30.0 * res.u[i] +
                            16.0 * res.u[i + 1] - res.u[i + 2]) /
                           (12.0 * dt * dt);
        const double rho = grid.nodes[i];
        const double lu = -d2t / (rho * rho) + xi * xi * res.u[i];
        num += grid.weights[i] * (lu - f_samples[i]) * (lu - f_samples[i]);
        den += grid.weights[i] * f_samples[i] * f_samples[i];
    }
    if (den == 0.0) { // zero source: exact zero solution
        res.residual = 0.0;
        return res;
    }
    res.residual = std::sqrt(num / den);
    if (res.residual > 1e-4)
        throw std::runtime_error("green_apply: grid too coarse for the requested source");

    // least squares of u against {1, log rho} on the innermost decade
    const double rho_hi = grid.nodes.front() * 10.0;
    double s11 = 0, s1l = 0, sll = 0, s1u = 0, slu = 0;
    for (std::size_t i = 0; i < n && grid.nodes[i] <= rho_hi; ++i) {
        const double l = std::log(grid.nodes[i]);
        s11 += 1.0;
        s1l += l;
        sll += l * l;
        s1u += res.u[i];
        slu += l * res.u[i];
    }
    const double det = s11 * sll - s1l * s1l;
    res.const_coeff = (sll * s1u - s1l * slu) / det;
    res.log_coeff = (s11 * slu - s1l * s1u) / det;
    return res;
}

std::vector<ScanVerdict> injectivity_scan(double gamma, const std::vector<double>& deltas,
                                          int n_max, const std::vector<double>& xis)
{
    if (!(gamma > 1.0))
        throw std::domain_error("injectivity_scan: gamma must exceed 1");
    std::vector<ScanVerdict> out;
    for (double delta : deltas) {
        ScanVerdict v;
        v.delta = delta;
        v.injective = true;
        for (int n = -n_max; n <= n_max; ++n) {
            for (double xi : xis) {
                if (xi == 0.0) continue;
                for (const EdgeModeSolution& sol : edge_mode_basis(n, gamma, xi)) {
                    ScanRow row;
                    row.n = n;
                    row.xi = xi;
                    row.delta = delta;
                    row.member = weighted_membership(sol, delta);
                    row.exponent_at_zero = sol.exponent_at_zero;
                    row.log_at_zero = sol.log_at_zero;
                    row.family = sol.family;
                    if (row.member) v.injective = false;
                    v.rows.push_back(std::move(row));
                }
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::string scan_csv(const std::vector<ScanVerdict>& verdicts)
{
    std::string csv = "n,xi,delta,member,exponent_at_zero\n";
    char buf[160];
    for (const auto& v : verdicts)
        for (const auto& r : v.rows) {
            char expo[32];
            if (r.log_at_zero)
                std::snprintf(expo, sizeof expo, "log");
            else
                std::snprintf(expo, sizeof expo, "%.17g", r.exponent_at_zero);
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d,%s\n", r.n, r.xi, r.delta,
                          r.member ? 1 : 0, expo);
            csv += buf;
        }
    return csv;
}

} // namespace conemf::normalop
