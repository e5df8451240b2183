#include <doctest.h>

#include <stdexcept>

#include "conemf/bessel.hpp"

#include <cmath>
#include <random>

using namespace conemf::bessel;

namespace {

// High-precision oracles, built before the production layer and kept
// independent of it: an extended-precision ascending series for I, the
// reflection formula / K0-K1 log series for K at small x, and the convergent
// tail of the asymptotic series at large x.

long double oracle_i(long double a, long double x)
{
    const long double head = a * std::log(x / 2.0L) - std::lgamma((double)(a + 1.0L));
    long double term = std::exp(head);
    long double sum = term;
    for (int k = 1; k < 5000; ++k) {
        term *= x * x / (4.0L * k * (a + k));
        sum += term;
        if (term < sum * 1e-24L) break;
    }
    return sum;
}

long double oracle_k_small(long double a, long double x)
{
    // non-integer order: K_a = pi/2 (I_{-a} - I_a) / sin(pi a)
    const long double pi = 3.141592653589793238462643383L;
    if (std::abs(a - std::round((double)a)) > 1e-6) {
        // I_{-a} head: 1/Gamma(1-a) = sin(pi a) Gamma(a) / pi keeps the sign
        long double im = 0.0L;
        {
            long double term = std::exp(-a * std::log(x / 2.0L) +
                                        std::lgamma((double)a)) *
                               std::sin(pi * a) / pi;
            im = term;
            for (int k = 1; k < 500; ++k) {
                term *= x * x / (4.0L * k * (k - a));
                im += term;
                if (std::abs(term) < std::abs(im) * 1e-24L) break;
            }
        }
        return 0.5L * pi * (im - oracle_i(a, x)) / std::sin(pi * a);
    }
    // integer order: K_0, K_1 log series plus upward recurrence
    const long double eg = 0.5772156649015328606065121L;
    const long double lh = std::log(x / 2.0L);
    long double k0 = -(lh + eg), term = 1.0L, harmonic = 0.0L;
    for (int k = 1; k < 300; ++k) {
        term *= x * x / (4.0L * k * k);
        harmonic += 1.0L / k;
        k0 += term * (harmonic - lh - eg);
        if (term < 1e-26L) break;
    }
    // K_1(x) = 1/x + log(x/2) I_1(x)
    //          - (x/4) sum_k [psi(k+1)+psi(k+2)] (x^2/4)^k / (k!(k+1)!)
    long double k1;
    {
        long double tk = 1.0L; // (x^2/4)^k / (k!(k+1)!) at k = 0
        long double hk = 0.0L, hk1 = 1.0L;
        long double s = (-2.0L * eg + hk + hk1) * tk;
        for (int k = 1; k < 300; ++k) {
            tk *= x * x / (4.0L * k * (k + 1));
            hk += 1.0L / k;
            hk1 += 1.0L / (k + 1);
            s += (-2.0L * eg + hk + hk1) * tk;
            if (tk < 1e-26L) break;
        }
        k1 = 1.0L / x + lh * oracle_i(1.0L, x) - 0.25L * x * s;
    }
    const int n = (int)std::lround((double)a);
    if (n == 0) return k0;
    long double km = k0, kc = k1;
    for (int j = 1; j < n; ++j) {
        const long double kn = km + 2.0L * j / x * kc;
        km = kc;
        kc = kn;
    }
    return kc;
}

// Frozen 25-digit reference values.
struct BesselRef {
    double a, x, i, k;
};
constexpr BesselRef kBesselRefs[] = {
    {0, 1e-6, 1.000000000000250000, 13.93144207362641941},
    {0, 0.001, 1.000000250000015625, 7.023688800562381344},
    {0, 0.1, 1.002501562934095601, 2.427069024702016613},
    {0, 1, 1.266065877752008336, 0.4210244382407083333},
    {0, 3.7, 8.738617524169395585, 0.01563065992162666161},
    {0, 10, 2815.716628466254471, 0.00001778006231616765181},
    {0, 25, 5774560606.466310316, 3.464161562213114355e-12},
    {0, 50, 2.932553783849336327e+20, 3.410167749789495514e-23},
    {1.0 / 3.0, 1e-6, 0.008888227733125300045, 168.7464311008926999},
    {1.0 / 3.0, 0.001, 0.08888229399666422742, 16.71504693651745989},
    {1.0 / 3.0, 0.1, 0.4133289410657918651, 2.899827980934577246},
    {1.0 / 3.0, 1, 1.064631397889529514, 0.4384306334415343617},
    {1.0 / 3.0, 3.7, 8.576655566037137934, 0.01584159892509701866},
    {1.0 / 3.0, 10, 2799.239609705679371, 0.00001787460827105533488},
    {1.0 / 3.0, 25, 5761474759.621364697, 3.471720142490706430e-12},
    {1.0 / 3.0, 50, 2.929263936564419381e+20, 3.413921781358362799e-23},
    {0.5, 1e-6, 0.0007978845608029983366, 1253.312884001989593},
    {0.5, 0.001, 0.02523132942542268078, 39.59365951311664361},
    {0.5, 0.1, 0.2527339846001319734, 3.586166838797260145},
    {0.5, 1, 0.9376748882454876467, 0.4610685044478945584},
    {0.5, 3.7, 8.383651985197354973, 0.01610903382548732644},
    {0.5, 10, 2778.784603874571024, 0.00001799347809370517961},
    {0.5, 25, 5745159748.346465758, 3.481191276840695157e-12},
    {0.5, 50, 2.925156852991290042e+20, 3.418620095457074636e-23},
    {1, 1e-6, 5.000000000000625000e-7, 999999.9999927842790},
    {1, 0.001, 0.0005000000625000026042, 999.9962381560855743},
    {1, 0.1, 0.05006252604709269211, 9.853844780870606135},
    {1, 1, 0.5651591039924850272, 0.6019072301972345747},
    {1, 3.7, 7.435745796535335731, 0.01762803510222326669},
    {1, 10, 2670.988303701254654, 0.00001864877345382558460},
    {1, 25, 5657865129.878701353, 3.532778073199933770e-12},
    {1, 50, 2.903078590103556797e+20, 3.444102226717555613e-23},
    {4.0 / 3.0, 1e-6, 3.333085399921719680e-9, 112508368.3750095752},
    {4.0 / 3.0, 0.001, 0.00003333085757037668804, 11250.82845983567303},
    {4.0 / 3.0, 0.1, 0.01548739406087141270, 24.08514921718466891},
    {4.0 / 3.0, 1, 0.3703854131499790881, 0.7867621510652311748},
    {4.0 / 3.0, 3.7, 6.587439293437664036, 0.01934491804675182374},
    {4.0 / 3.0, 10, 2563.793078378340989, 0.00001935282812093389327},
    {4.0 / 3.0, 25, 5568758115.037151545, 3.587072953648613214e-12},
    {4.0 / 3.0, 50, 2.880359823038227859e+20, 3.470727487228152816e-23},
    {2.5, 1e-6, 5.319230405352815651e-17, 3759942411945874.097},
    {2.5, 0.001, 1.682088468162611085e-9, 118899799.1115487939},
    {2.5, 0.1, 0.0001683290173488853281, 1187.021223641893108},
    {2.5, 1, 0.05709890920304824735, 3.227479531135261909},
    {2.5, 3.7, 3.414958395937986300, 0.03270051497518574155},
    {2.5, 10, 2028.512757391935669, 0.00002393132586462788888},
    {2.5, 25, 5083317345.336952903, 3.915643948190413913e-12},
    {2.5, 50, 2.753157630035402187e+20, 3.627839645299047603e-23},
    {7, 1e-6, 1.550099206349254790e-48, 4.607999999999808000e+46},
    {7, 0.001, 1.550099254789807220e-27, 4.607999808000004800e+25},
    {7, 0.1, 1.550583679635408732e-13, 460608047990.0020828},
    {7, 1, 1.599218231200995253e-6, 44207.02033191487891},
    {7, 3.7, 0.02235562630558430957, 2.821236262101806494},
    {7, 10, 238.0255847757819945, 0.0001720257945607573952},
    {7, 25, 2138344874.173431230, 9.007614807798004314e-12},
    {7, 50, 1.789094880232034363e+20, 5.535675222709996020e-23},
    {10, 1e-6, 2.691144455467433296e-70, 1.857945599999948390e+68},
    {10, 0.001, 2.691144516629746759e-40, 1.857945548390400806e+38},
    {10, 0.1, 2.691756142922141528e-20, 1857429584630401000.},
    {10, 1, 2.752948039836873625e-10, 180713289.9010294547},
    {10, 3.7, 0.0001759466242955757259, 266.3990703218253417},
    {10, 10, 21.89170616372337053, 0.001614255300390670023},
    {10, 25, 771298871.1707266618, 2.407676960280122405e-11},
    {10, 50, 1.071597159477637047e+20, 9.150988209987996112e-23},
};

} // namespace

TEST_CASE("bessel values match the frozen high-precision references to 1e-12")
{
    for (const auto& ref : kBesselRefs) {
        CHECK(std::abs(bessel_i(ref.a, ref.x) - ref.i) <= 1e-12 * std::abs(ref.i));
        CHECK(std::abs(bessel_k(ref.a, ref.x) - ref.k) <= 1e-12 * std::abs(ref.k));
    }
}

TEST_CASE("bessel values match the extended-precision series oracles")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.0, 6.0), ux(-5.0, 0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = ua(rng);
        const double x = std::pow(10.0, ux(rng));
        const double iv = bessel_i(a, x);
        CHECK(std::abs(iv - (double)oracle_i(a, x)) <= 1e-12 * std::abs(iv));
        // the reflection formula cancels catastrophically near integer order
        if (x <= 1.5 && std::abs(a - std::round(a)) > 0.05) {
            const double kv = bessel_k(a, x);
            const double ko = (double)oracle_k_small(a, x);
            CHECK(std::abs(kv - ko) <= 2e-12 * std::abs(kv));
        }
    }
    // integer-order K oracle (log series + recurrence)
    for (double a : {0.0, 1.0, 3.0, 7.0}) {
        for (double x : {0.01, 0.3, 1.2}) {
            const double kv = bessel_k(a, x);
            const double ko = (double)oracle_k_small(a, x);
            CHECK(std::abs(kv - ko) <= 2e-12 * std::abs(kv));
        }
    }
}

TEST_CASE("small-argument limit of I_0 and the Wronskian identity")
{
    CHECK(bessel_i(0.0, 1e-8) == doctest::Approx(1.0).epsilon(1e-12));

    for (double a : {0.0, 1.0 / 3.0, 4.0 / 3.0, 7.0}) {
        for (int i = 0; i <= 50; ++i) {
            const double x = 0.1 * std::pow(300.0, i / 50.0);
            const double w = x * (bessel_i(a, x) * bessel_k_deriv(a, x) -
                                  bessel_i_deriv(a, x) * bessel_k(a, x));
            CHECK(std::abs(w + 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("displayed large-x asymptotics at their forced accuracy")
{
    const double pi = 3.14159265358979323846;
    const double x = 25.0;
    // K_{1/2} equals the displayed form identically
    CHECK(bessel_k(0.5, x) * std::sqrt(2.0 * x / pi) * std::exp(x) ==
          doctest::Approx(1.0).epsilon(1e-10));
    // at a = 1/3 the leading form is off by (4a^2-1)/(8x) ~ 2.8e-3
    const double r = bessel_k(1.0 / 3.0, x) * std::sqrt(2.0 * x / pi) * std::exp(x);
    CHECK(r == doctest::Approx(0.9972793410).epsilon(1e-8));
    CHECK(std::abs(r - 1.0) < 5e-3);
}

TEST_CASE("scaled variants agree with unscaled ones and survive overflow")
{
    for (double a : {0.0, 2.5}) {
        for (double x : {1.0, 30.0, 300.0}) {
            CHECK(bessel_i_scaled(a, x) ==
                  doctest::Approx(bessel_i(a, x) * std::exp(-x)).epsilon(1e-11));
            CHECK(bessel_k_scaled(a, x) ==
                  doctest::Approx(bessel_k(a, x) * std::exp(x)).epsilon(1e-11));
        }
    }
    CHECK(std::isfinite(bessel_i_scaled(1.0, 2000.0)));
    CHECK(std::isfinite(bessel_k_scaled(1.0, 2000.0)));
    CHECK_THROWS_AS((void)bessel_i(0.0, 800.0), std::overflow_error);
    CHECK_THROWS_AS((void)bessel_k(0.0, 800.0), std::overflow_error);
    CHECK_THROWS_AS((void)bessel_i(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)bessel_k(1.0, 0.0), std::domain_error);
}
