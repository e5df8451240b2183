#include "conemf/indicial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

namespace conemf::indicial {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDedupTol = 1e-12;

bool is_endpoint(double v, const CriticalWindow& w)
{
    return std::abs(v - w.hi) <= kDedupTol;
}

struct RootAccumulator {
    std::vector<IndicialRoot> roots;

    void add(double value, ModeDescriptor mode)
    {
        for (auto& r : roots) {
            if (std::abs(r.value - value) <= kDedupTol) {
                r.multiplicity += 1;
                if (mode.log_solution) r.has_log_partner = true;
                r.modes.push_back(std::move(mode));
                return;
            }
        }
        IndicialRoot r;
        r.value = value;
        r.multiplicity = 1;
        r.has_log_partner = mode.log_solution;
        r.modes.push_back(std::move(mode));
        roots.push_back(std::move(r));
    }

    std::vector<IndicialRoot> sorted() &&
    {
        std::sort(roots.begin(), roots.end(),
                  [](const IndicialRoot& a, const IndicialRoot& b) { return a.value < b.value; });
        return std::move(roots);
    }
};

double check_angle(double angle)
{
    if (!(angle > 0.0) || !(angle < 2.0 * kPi))
        throw std::domain_error("indicial: angle must lie in (0, 2*pi)");
    return 2.0 * kPi / angle;
}

CriticalWindow resolve_window(std::optional<Window> w, int transverse_dim)
{
    CriticalWindow cw = critical_window(transverse_dim);
    if (w) {
        cw.lo = w->first;
        cw.hi = w->second;
    }
    return cw;
}

int fourier_bound(double gamma, const CriticalWindow& w)
{
    const double reach = std::max(std::abs(w.lo), std::abs(w.hi)) + 1.0;
    return static_cast<int>(std::ceil(reach / gamma)) + 1;
}

} // namespace

std::string locus_name(Locus l)
{
    switch (l) {
        case Locus::cone_scalar: return "cone-scalar";
        case Locus::cone_oneform: return "cone-oneform";
        case Locus::edge: return "edge";
        case Locus::vertex: return "vertex";
    }
    return "?";
}

bool CriticalWindow::contains(double mu, double tol) const
{
    return mu > lo + tol && mu <= hi + tol;
}

bool CriticalWindow::in_l2(double mu) const
{
    return mu > -0.5 * transverse_dim;
}

CriticalWindow critical_window(int transverse_dim)
{
    if (transverse_dim != 2 && transverse_dim != 3)
        throw std::domain_error("critical_window: transverse dimension must be 2 or 3");
    CriticalWindow w;
    w.transverse_dim = transverse_dim;
    w.measure_exponent = transverse_dim - 1;
    w.lo = -0.5 * transverse_dim;
    w.hi = w.lo + 2.0;
    return w;
}

IndicialReport roots_cone_scalar(double angle, std::optional<Window> window)
{
    const double gamma = check_angle(angle);
    IndicialReport rep;
    rep.operator_tag = "laplace-0";
    rep.locus = Locus::cone_scalar;
    rep.angle = angle;
    rep.window = resolve_window(window, 2);

    RootAccumulator acc;
    const int nb = fourier_bound(gamma, rep.window);
    for (int n = -nb; n <= nb; ++n) {
        if (n == 0) {
            if (rep.window.contains(0.0)) {
                acc.add(0.0, {"scalar", 0, 0.0, false});
                acc.add(0.0, {"scalar", 0, 0.0, true});
            }
            continue;
        }
        for (double v : {std::abs(n) * gamma, -std::abs(n) * gamma})
            if (rep.window.contains(v)) acc.add(v, {"scalar", n, 0.0, false});
    }
    rep.roots = std::move(acc).sorted();
    for (auto& r : rep.roots) r.endpoint = is_endpoint(r.value, rep.window);
    return rep;
}

namespace {

void add_oneform_families(RootAccumulator& acc, double gamma, const CriticalWindow& w)
{
    const int nb = fourier_bound(gamma, w);
    for (int n = -nb; n <= nb; ++n) {
        const double ng = n * gamma;
        struct Fam {
            double value;
            const char* pol;
        };
        const Fam fams[4] = {{ng + 1.0, "eta++"},
                             {-ng - 1.0, "eta+-"},
                             {ng - 1.0, "eta-+"},
                             {-ng + 1.0, "eta--"}};
        for (const auto& f : fams)
            if (w.contains(f.value)) acc.add(f.value, {f.pol, n, 0.0, false});
    }
}

void mark_oneform_flags(IndicialReport& rep, double gamma)
{
    for (auto& r : rep.roots) {
        r.endpoint = is_endpoint(r.value, rep.window);
        if (gamma < 2.0 && (std::abs(r.value - (gamma - 1.0)) <= kDedupTol ||
                            std::abs(r.value - (1.0 - gamma)) <= kDedupTol)) {
            bool oneform = false;
            for (const auto& m : r.modes) oneform |= m.polarization.rfind("eta", 0) == 0;
            if (oneform) r.critical_pair = true;
        }
        if (r.endpoint) {
            bool from_n0 = false;
            for (const auto& m : r.modes)
                from_n0 |= m.fourier_n == 0 && m.polarization.rfind("eta", 0) == 0;
            if (from_n0)
                r.note = "endpoint root from n=0 (omitted by the usual critical-root lists)";
        }
    }
}

} // namespace

IndicialReport roots_cone_oneform(double angle, std::optional<Window> window)
{
    const double gamma = check_angle(angle);
    IndicialReport rep;
    rep.operator_tag = "laplace-1";
    rep.locus = Locus::cone_oneform;
    rep.angle = angle;
    rep.window = resolve_window(window, 2);

    RootAccumulator acc;
    add_oneform_families(acc, gamma, rep.window);
    rep.roots = std::move(acc).sorted();
    mark_oneform_flags(rep, gamma);
    return rep;
}

IndicialReport roots_edge(double angle, std::optional<Window> window)
{
    const double gamma = check_angle(angle);
    IndicialReport rep;
    rep.operator_tag = "rough-laplace-edge";
    rep.locus = Locus::edge;
    rep.angle = angle;
    rep.window = resolve_window(window, 2);

    RootAccumulator acc;
    add_oneform_families(acc, gamma, rep.window);
    const int nb = fourier_bound(gamma, rep.window);
    for (int n = -nb; n <= nb; ++n) {
        if (n == 0) {
            if (rep.window.contains(0.0)) {
                acc.add(0.0, {"dy", 0, 0.0, false});
                acc.add(0.0, {"dy", 0, 0.0, true});
            }
            continue;
        }
        for (double v : {std::abs(n) * gamma, -std::abs(n) * gamma})
            if (rep.window.contains(v)) acc.add(v, {"dy", n, 0.0, false});
    }
    rep.roots = std::move(acc).sorted();
    mark_oneform_flags(rep, gamma);
    return rep;
}

IndicialReport roots_vertex(const std::vector<double>& link_spectrum)
{
    if (link_spectrum.empty() || std::abs(link_spectrum.front()) > kDedupTol)
        throw std::domain_error("roots_vertex: spectrum must start with the zero eigenvalue");
    for (std::size_t i = 1; i < link_spectrum.size(); ++i) {
        const double l = link_spectrum[i];
        if (!(l > 0.0) || l <= 1.0)
            throw std::domain_error(
                "roots_vertex: nonzero link eigenvalues must exceed 1 "
                "(spectral gap of the link Laplacian)");
    }

    IndicialReport rep;
    rep.operator_tag = "rough-laplace-vertex";
    rep.locus = Locus::vertex;
    rep.link_spectrum = link_spectrum;
    rep.window = critical_window(3);

    // Group repeated eigenvalues; each replica contributes one solution.
    std::map<double, int> grouped;
    for (std::size_t i = 1; i < link_spectrum.size(); ++i) {
        bool merged = false;
        for (auto& [l, m] : grouped)
            if (std::abs(l - link_spectrum[i]) <= kDedupTol) {
                ++m;
                merged = true;
                break;
            }
        if (!merged) grouped[link_spectrum[i]] = 1;
    }

    RootAccumulator acc;
    acc.add(1.0, {"radial-lambda0", 0, 0.0, false});
    acc.add(-2.0, {"radial-lambda0", 0, 0.0, false});
    for (const auto& [lambda, mult] : grouped) {
        const double s = std::sqrt(1.0 + 4.0 * lambda);
        const struct {
            double value;
            const char* pol;
        } fams[6] = {{-0.5 + 0.5 * s, "coexact"},  {-0.5 - 0.5 * s, "coexact"},
                     {-1.5 + 0.5 * s, "coupled-A"}, {-1.5 - 0.5 * s, "coupled-A"},
                     {0.5 + 0.5 * s, "coupled-B"},  {0.5 - 0.5 * s, "coupled-B"}};
        for (const auto& f : fams)
            for (int i = 0; i < mult; ++i) acc.add(f.value, {f.pol, 0, lambda, false});
    }
    rep.roots = std::move(acc).sorted();

    for (auto& r : rep.roots) {
        r.endpoint = is_endpoint(r.value, rep.window);
        if (!rep.window.contains(r.value)) continue;
        for (const auto& m : r.modes) {
            const double s = std::sqrt(1.0 + 4.0 * m.link_lambda);
            if (m.polarization == "coupled-A" &&
                std::abs(r.value - (-1.5 + 0.5 * s)) <= kDedupTol) {
                r.critical_pair = true;
                r.note = "group A";
            } else if (m.polarization == "coupled-B" &&
                       std::abs(r.value - (0.5 - 0.5 * s)) <= kDedupTol) {
                r.critical_pair = true;
                r.note = "group B";
            }
        }
    }
    return rep;
}

IndicialReport friedrichs_filter(const IndicialReport& report, bool include_endpoints)
{
    const CriticalWindow& w = report.window;
    const double mid = w.lo + 1.0;

    std::vector<IndicialRoot> allowed;
    for (const IndicialRoot& r : report.roots) {
        if (!w.contains(r.value)) continue;
        if (is_endpoint(r.value, w)) {
            if (!include_endpoints) continue;
            IndicialRoot keep = r;
            keep.note = "endpoint root, included on request";
            allowed.push_back(std::move(keep));
            continue;
        }
        if (std::abs(r.value - mid) <= kDedupTol) {
            IndicialRoot keep = r;
            keep.modes.clear();
            for (const auto& m : r.modes)
                if (!m.log_solution) keep.modes.push_back(m);
            if (keep.modes.empty()) continue;
            keep.multiplicity = static_cast<int>(keep.modes.size());
            keep.has_log_partner = false;
            keep.note = "midpoint root: power solution kept, log partner excluded";
            allowed.push_back(std::move(keep));
            continue;
        }
        if (r.value > mid + kDedupTol) {
            IndicialRoot keep = r;
            if (keep.note.empty()) keep.note = "upper half of the critical interval";
            allowed.push_back(std::move(keep));
        }
        // roots below the midpoint blow up too fast and are excluded
    }

    IndicialReport out = report;
    out.roots = allowed;
    out.friedrichs_allowed = std::move(allowed);
    return out;
}

// ---------------------------------------------------------------------------
// mode_residual: exact action of the radial indicial operator on the span of
// r^mu and r^mu log r, evaluated on a grid and normalized by the operator and
// mode scale.

namespace {

using cplx = std::complex<double>;

// (c0 + c1 t) e^{mu t} in t = log r; r d/dr acts exactly on the coefficients.
struct PowLog {
    double mu = 0.0;
    cplx c0{0.0, 0.0};
    cplx c1{0.0, 0.0};

    PowLog deriv() const { return {mu, mu * c0 + c1, mu * c1}; }
    cplx eval(double t) const { return (c0 + c1 * t) * std::exp(mu * t); }
};

PowLog operator*(double a, const PowLog& p) { return {p.mu, a * p.c0, a * p.c1}; }
PowLog operator*(cplx a, const PowLog& p) { return {p.mu, a * p.c0, a * p.c1}; }
PowLog operator+(const PowLog& a, const PowLog& b)
{
    return {a.mu, a.c0 + b.c0, a.c1 + b.c1};
}

double grid_residual(const std::vector<PowLog>& applied, const std::vector<PowLog>& mode,
                     double op_scale)
{
    double worst = 0.0;
    for (int i = 0; i <= 24; ++i) {
        const double t = -6.0 + 6.0 * i / 24.0;
        double num = 0.0, den = 0.0;
        for (const auto& p : applied) num += std::abs(p.eval(t));
        for (const auto& p : mode)
            den += (std::abs(p.c0) + std::abs(p.c1) * (1.0 + std::abs(t))) *
                   std::exp(p.mu * t);
        worst = std::max(worst, num / (op_scale * den));
    }
    return worst;
}

} // namespace

double mode_residual(Locus locus, double angle_or_lambda, double root,
                     const ModeDescriptor& mode)
{
    const double mu = root;
    const cplx zero{0.0, 0.0}, one{1.0, 0.0};

    if (locus == Locus::cone_scalar ||
        (locus == Locus::edge && mode.polarization == "dy")) {
        const double gamma = check_angle(angle_or_lambda);
        const double ng = mode.fourier_n * gamma;
        PowLog u{mu, mode.log_solution ? zero : one, mode.log_solution ? one : zero};
        const PowLog d2 = u.deriv().deriv();
        const PowLog applied = -1.0 * d2 + (ng * ng) * u;
        return grid_residual({applied}, {u}, 1.0 + mu * mu + ng * ng);
    }

    if (locus == Locus::cone_oneform || locus == Locus::edge) {
        const double gamma = check_angle(angle_or_lambda);
        const double ng = mode.fourier_n * gamma;
        const bool plus_orientation = mode.polarization == "eta++" ||
                                      mode.polarization == "eta+-";
        // eta^{+.} pairs g = -i f, eta^{-.} pairs g = +i f.
        const cplx gcoef = plus_orientation ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
        PowLog f{mu, one, zero};
        PowLog g{mu, gcoef, zero};
        const double c = ng * ng + 1.0;
        const cplx tng{0.0, 2.0 * ng};
        const PowLog rf = -1.0 * f.deriv().deriv() + c * f + tng * g;
        const PowLog rg = -1.0 * g.deriv().deriv() + c * g + (-tng) * f;
        return grid_residual({rf, rg}, {f, g},
                             1.0 + mu * mu + c + 2.0 * std::abs(ng));
    }

    // vertex locus
    const double lambda = mode.link_lambda;
    if (mode.polarization == "coexact" || mode.polarization == "radial-lambda0") {
        const double c = mode.polarization == "coexact" ? lambda : 2.0;
        PowLog u{mu, one, zero};
        const PowLog applied =
            -1.0 * u.deriv().deriv() + -1.0 * u.deriv() + c * u;
        return grid_residual({applied}, {u}, 1.0 + mu * mu + std::abs(mu) + c);
    }
    if (mode.polarization == "coupled-A" || mode.polarization == "coupled-B") {
        const double s = std::sqrt(1.0 + 4.0 * lambda);
        const double sl = std::sqrt(lambda);
        const double x = mu * mu + mu;
        // The 2x2 coupled system has eigenvector (2 sqrt(l), 1+s) on the
        // mu^2+mu = 1+l-s branch and (1+s, -2 sqrt(l)) on the other.
        double a, b;
        if (std::abs(x - (1.0 + lambda - s)) <= std::abs(x - (1.0 + lambda + s))) {
            a = 2.0 * sl;
            b = 1.0 + s;
        } else {
            a = 1.0 + s;
            b = -2.0 * sl;
        }
        PowLog f{mu, cplx{a, 0.0}, zero};
        PowLog g{mu, cplx{b, 0.0}, zero};
        const PowLog rf = -1.0 * f.deriv().deriv() + -1.0 * f.deriv() +
                          (2.0 + lambda) * f + (-2.0 * sl) * g;
        const PowLog rg = -1.0 * g.deriv().deriv() + -1.0 * g.deriv() + lambda * g +
                          (-2.0 * sl) * f;
        return grid_residual({rf, rg}, {f, g},
                             1.0 + mu * mu + std::abs(mu) + 2.0 + lambda + 2.0 * sl);
    }
    throw std::domain_error("mode_residual: unsupported mode '" + mode.polarization +
                            "' for locus " + locus_name(locus));
}

} // namespace conemf::indicial
