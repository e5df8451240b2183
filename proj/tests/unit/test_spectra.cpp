#include <doctest.h>

#include "conemf/spectra.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace conemf::spectra;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("round sphere spectrum with label counting")
{
    const auto list = football_spectrum(2.0 * kPi, 7.0);
    REQUIRE(list.entries.size() == 3);
    CHECK(list.entries[0].lambda == doctest::Approx(0.0));
    CHECK(list.entries[0].multiplicity == 1);
    CHECK(list.entries[1].lambda == doctest::Approx(2.0));
    CHECK(list.entries[1].multiplicity == 3);
    CHECK(list.entries[2].lambda == doctest::Approx(6.0));
    CHECK(list.entries[2].multiplicity == 5);
}

TEST_CASE("football eigenvalues for angle pi")
{
    // gamma = 2: lambda = (2|n|+k)(2|n|+k+1)
    const auto list = football_spectrum(kPi, 13.0);
    std::vector<double> flat = list.flatten();
    const std::vector<double> expected{0, 2, 6, 6, 6, 12, 12, 12};
    REQUIRE(flat.size() == expected.size());
    for (std::size_t i = 0; i < flat.size(); ++i)
        CHECK(flat[i] == doctest::Approx(expected[i]).epsilon(1e-12));

    CHECK(list.smallest_nonzero() == doctest::Approx(2.0));
    CHECK_THROWS_AS(football_spectrum(7.0, 13.0), std::domain_error);
    CHECK_THROWS_AS(football_spectrum(kPi, -1.0), std::domain_error);
}

TEST_CASE("shooting mismatch vanishes exactly at closed-form eigenvalues")
{
    CHECK(std::abs(legendre_shooting(1.0, 0, 2.0)) <= 1e-9);
    CHECK(std::abs(legendre_shooting(2.0, 1, 6.0)) <= 1e-9);
    CHECK(std::abs(legendre_shooting(2.0, 1, 5.0)) > 1e-3);
    CHECK_THROWS_AS(legendre_shooting(0.5, 0, 1.0), std::domain_error);
}

TEST_CASE("oracle agrees with the closed form and finds no extra eigenvalues")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ua(0.1, 2.0 * kPi - 1e-3);
    for (int trial = 0; trial < 20; ++trial) {
        const double angle = ua(rng);
        const double gamma = 2.0 * kPi / angle;
        const auto list = football_spectrum(angle, 15.0);

        // group the closed-form eigenvalues by |n|
        std::map<int, std::vector<double>> by_n;
        for (const auto& e : list.entries)
            for (const auto& [n, k] : e.labels)
                if (n >= 0) by_n[n].push_back(e.lambda);

        for (auto& [n, lams] : by_n) {
            std::sort(lams.begin(), lams.end());
            std::vector<double> expected_zeros;
            for (double l : lams)
                if (l > 1e-9) expected_zeros.push_back(l);
            const auto zeros = shooting_scan(gamma, n, 15.0, 0.25);
            REQUIRE(zeros.size() == expected_zeros.size());
            for (std::size_t i = 0; i < zeros.size(); ++i)
                CHECK(std::abs(zeros[i] - expected_zeros[i]) <= 1e-8);
        }
    }
}

TEST_CASE("eigenvalues shrink as the angle grows, at fixed nonzero label")
{
    // gamma decreases with angle, so (|n| gamma + k)(...) decreases
    double prev = 1e300;
    for (double angle : {0.8, 1.6, 2.4, 3.2, 4.0}) {
        const double gamma = 2.0 * kPi / angle;
        const double lam = (gamma + 1.0) * (gamma + 2.0); // n=1, k=1
        CHECK(lam < prev);
        prev = lam;
    }
}

TEST_CASE("one-form spectrum construction")
{
    EigenvalueList scalar;
    scalar.entries = {{0.0, 1, {{0, 0}}}, {2.0, 3, {{0, 1}, {1, 0}, {-1, 0}}}};
    const auto oneform = scalar_to_oneform_spectrum(scalar);
    REQUIRE(oneform.entries.size() == 1);
    CHECK(oneform.entries[0].lambda == 2.0);
    CHECK(oneform.entries[0].multiplicity == 6);

    EigenvalueList only_zero;
    only_zero.entries = {{0.0, 1, {{0, 0}}}};
    CHECK(scalar_to_oneform_spectrum(only_zero).entries.empty());

    const auto football = football_spectrum(kPi, 13.0);
    for (const auto& e : scalar_to_oneform_spectrum(football).entries)
        CHECK(e.lambda > 1.0);
}

TEST_CASE("spectral bounds: Weiss equality and the one-form gap")
{
    for (double angle : {0.5, 1.5, kPi, 5.0}) {
        const auto b = check_spectral_bounds(football_spectrum(angle, 10.0));
        CHECK(b.weiss_ok);
        CHECK(b.oneform_gap_ok);
        // equality case: the smallest nonzero eigenvalue is exactly 2
        CHECK(football_spectrum(angle, 10.0).smallest_nonzero() ==
              doctest::Approx(2.0).epsilon(1e-12));
    }

    EigenvalueList bad;
    bad.entries = {{0.0, 1, {{0, 0}}}, {1.5, 1, {{0, 1}}}};
    CHECK_FALSE(check_spectral_bounds(bad).weiss_ok);
}

TEST_CASE("spectrum text format round-trip")
{
    const auto list = football_spectrum(1.5 * kPi, 12.0);
    const std::string text = serialize_spectrum(list);
    std::istringstream in(text);
    const auto parsed = parse_spectrum(in);
    REQUIRE(parsed.entries.size() == list.entries.size());
    for (std::size_t i = 0; i < parsed.entries.size(); ++i) {
        CHECK(parsed.entries[i].lambda == list.entries[i].lambda);
        CHECK(parsed.entries[i].multiplicity == list.entries[i].multiplicity);
    }
}
