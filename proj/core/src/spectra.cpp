#include "conemf/spectra.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace conemf::spectra {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMergeTol = 1e-9;

} // namespace

double EigenvalueList::smallest_nonzero() const
{
    for (const auto& e : entries)
        if (e.lambda > kMergeTol) return e.lambda;
    throw std::runtime_error("spectrum has no nonzero eigenvalue");
}

std::vector<double> EigenvalueList::flatten() const
{
    std::vector<double> out;
    for (const auto& e : entries)
        for (int i = 0; i < e.multiplicity; ++i) out.push_back(e.lambda);
    return out;
}

EigenvalueList football_spectrum(double angle, double lambda_max)
{
    if (!(angle > 0.0) || angle > 2.0 * kPi)
        throw std::domain_error("football_spectrum: angle must lie in (0, 2*pi]");
    if (!(lambda_max > 0.0))
        throw std::domain_error("football_spectrum: lambda_max must be positive");

    const double gamma = 2.0 * kPi / angle;
    std::vector<std::pair<double, std::pair<int, int>>> raw;
    const double nu_max = 0.5 * (std::sqrt(1.0 + 4.0 * lambda_max) - 1.0);
    const int n_max = static_cast<int>(std::floor(nu_max / gamma));
    for (int n = -n_max; n <= n_max; ++n) {
        const double m = std::abs(n) * gamma;
        for (int k = 0;; ++k) {
            const double nu = m + k;
            const double lambda = nu * (nu + 1.0);
            if (lambda > lambda_max) break;
            raw.push_back({lambda, {n, k}});
        }
    }
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    EigenvalueList list;
    for (const auto& [lambda, label] : raw) {
        if (!list.entries.empty() &&
            std::abs(list.entries.back().lambda - lambda) <= kMergeTol * std::max(1.0, lambda)) {
            list.entries.back().multiplicity += 1;
            list.entries.back().labels.push_back(label);
        } else {
            list.entries.push_back({lambda, 1, {label}});
        }
    }
    return list;
}

namespace {

// Two-term Frobenius start f ~ r^m (1 + a r^2) at a regular-singular pole.
struct FrobeniusStart {
    double f, df;
};

FrobeniusStart frobenius(double m, double lambda, double r0)
{
    const double a = (m * (m + 1.0) / 3.0 - lambda) / ((m + 2.0) * (m + 2.0));
    const double rm = std::pow(r0, m);
    return {rm * (1.0 + a * r0 * r0), rm / r0 * (m + (m + 2.0) * a * r0 * r0)};
}

using State = std::array<double, 2>;

void integrate_leg(double m, double lambda, double r_from, double r_to, State& y)
{
    namespace ode = boost::numeric::odeint;
    auto rhs = [m, lambda](const State& s, State& dsdr, double r) {
        dsdr[0] = s[1];
        dsdr[1] = -std::cos(r) / std::sin(r) * s[1] +
                  (m * m / (std::sin(r) * std::sin(r)) - lambda) * s[0];
    };
    auto stepper = ode::make_controlled<ode::runge_kutta_cash_karp54<State>>(1e-13, 1e-13);
    ode::integrate_adaptive(stepper, rhs, y, r_from, r_to, (r_to - r_from) / 64.0);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
        throw std::runtime_error("legendre_shooting: integration blew up");
}

} // namespace

double legendre_shooting(double gamma, int n, double lambda)
{
    if (!(gamma >= 1.0))
        throw std::domain_error("legendre_shooting: gamma must be >= 1");
    if (!(lambda >= 0.0))
        throw std::domain_error("legendre_shooting: lambda must be >= 0");

    const double m = std::abs(n) * gamma;
    const double r0 = 1e-3;
    const double mid = 0.5 * kPi;

    const FrobeniusStart start = frobenius(m, lambda, r0);
    State left{start.f, start.df};
    integrate_leg(m, lambda, r0, mid, left);

    // The equation is invariant under r -> pi - r, so the solution launched
    // from the far pole is the reflection of the left one: f_R(r) = f_L(pi-r),
    // f_R'(r) = -f_L'(pi-r).
    const State right{left[0], -left[1]};

    const double nl = std::hypot(left[0], left[1]);
    const double nr = std::hypot(right[0], right[1]);
    return (left[0] * right[1] - left[1] * right[0]) / (nl * nr);
}

double shooting_eigenvalue(double gamma, int n, double lo, double hi, double lambda_tol)
{
    double flo = legendre_shooting(gamma, n, lo);
    double fhi = legendre_shooting(gamma, n, hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw std::runtime_error("shooting_eigenvalue: no sign change in bracket");
    while (hi - lo > lambda_tol) {
        const double midl = 0.5 * (lo + hi);
        const double fm = legendre_shooting(gamma, n, midl);
        if (fm == 0.0) return midl;
        if (flo * fm < 0.0) {
            hi = midl;
        } else {
            lo = midl;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> shooting_scan(double gamma, int n, double lambda_max, double step)
{
    std::vector<double> zeros;
    double prev_l = (n == 0) ? step * 0.25 : 1e-4;
    double prev_f = legendre_shooting(gamma, n, prev_l);
    for (double l = prev_l + step; l <= lambda_max + step; l += step) {
        const double f = legendre_shooting(gamma, n, l);
        if (prev_f == 0.0)
            zeros.push_back(prev_l);
        else if (prev_f * f < 0.0)
            zeros.push_back(shooting_eigenvalue(gamma, n, prev_l, l));
        prev_l = l;
        prev_f = f;
    }
    std::erase_if(zeros, [lambda_max](double z) { return z > lambda_max; });
    return zeros;
}

EigenvalueList scalar_to_oneform_spectrum(const EigenvalueList& scalar)
{
    EigenvalueList out;
    for (const auto& e : scalar.entries) {
        if (e.lambda <= kMergeTol) continue;
        EigenvalueEntry d = e;
        d.multiplicity = 2 * e.multiplicity;
        d.labels.insert(d.labels.end(), e.labels.begin(), e.labels.end());
        out.entries.push_back(std::move(d));
    }
    return out;
}

SpectralBounds check_spectral_bounds(const EigenvalueList& scalar)
{
    SpectralBounds b;
    double lam1 = std::numeric_limits<double>::infinity();
    for (const auto& e : scalar.entries)
        if (e.lambda > kMergeTol) { lam1 = e.lambda; break; }
    b.weiss_ok = lam1 >= 2.0 - 1e-9;
    const EigenvalueList oneform = scalar_to_oneform_spectrum(scalar);
    b.oneform_gap_ok = true;
    for (const auto& e : oneform.entries)
        if (e.lambda <= 1.0) b.oneform_gap_ok = false;
    return b;
}

std::string serialize_spectrum(const EigenvalueList& list)
{
    std::string out = "# lambda multiplicity\n";
    char buf[64];
    for (const auto& e : list.entries) {
        std::snprintf(buf, sizeof buf, "%.17g %d\n", e.lambda, e.multiplicity);
        out += buf;
    }
    return out;
}

EigenvalueList parse_spectrum(std::istream& in)
{
    EigenvalueList list;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double lambda;
        if (!(ls >> lambda)) continue;
        int mult = 1;
        ls >> mult;
        list.entries.push_back({lambda, mult, {}});
    }
    std::sort(list.entries.begin(), list.entries.end(),
              [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    return list;
}

} // namespace conemf::spectra
