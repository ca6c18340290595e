#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ubmot/density.hpp"
#include "ubmot/errors.hpp"
#include "ubmot/moments.hpp"
#include "ubmot/specfun.hpp"

using namespace ubmot;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("density") {

TEST_CASE("reference values past t = 4") {
    for (auto m : {DensityMethod::HERGLOTZ, DensityMethod::FOURIER}) {
        CHECK(density_limit(6, 1, m) == Approx(1.0576285433190543).epsilon(1e-10));
        CHECK(density_limit(5, 2.5, m) == Approx(0.88474388412691672).epsilon(1e-10));
    }
}

TEST_CASE("profile is even, normalized and vanishes past the edge") {
    for (double t : {1.0, 2.0, 3.5, 6.0}) {
        const int n = 2000;
        std::vector<double> xs;
        for (int i = 0; i < n; ++i) xs.push_back(-kPi + 2 * kPi * (i + 0.5) / n);
        DensityProfile prof = density_profile(t, xs);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            s += prof.values[i];
            CHECK(prof.values[i] >= 0.0);
            CHECK(prof.values[i] == Approx(prof.values[n - 1 - i]).epsilon(1e-10));
        }
        // midpoint rule; sqrt edges limit it to ~1e-5
        CHECK(s / n == Approx(1.0).epsilon(t < 4 ? 1e-4 : 1e-12));
        if (t < 4) {
            CHECK(density_limit(t, std::min(kPi, prof.support_edge + 0.05)) == 0.0);
            CHECK(prof.edge_amplitude.has_value());
        }
    }
}

TEST_CASE("closed-form edge") {
    CHECK(support_edge(2.0) == Approx(1.0 + kPi / 2).epsilon(1e-15));
    CHECK(support_edge(3.999999) < kPi);
    CHECK_THROWS_AS(support_edge(4.0), DomainError);
    CHECK(edge_amplitude(2.0) == Approx(0.22507907903927651).epsilon(1e-14));
}

TEST_CASE("Herglotz function") {
    const double t = 2.0;
    for (double x : {0.0, 0.7, 2.0}) {
        cplx H = herglotz_solve(t, x);
        CHECK(H.real() >= 0.0);
        const cplx r = (H - 1.0) / (H + 1.0) * std::exp(0.5 * t * H) - std::polar(1.0, x);
        CHECK(std::abs(r) < 1e-10);
        CHECK(std::abs(herglotz_solve(t, -x) - std::conj(H)) < 1e-12);
    }
    // interior: H(0) = 1 and the Taylor series in the moments
    CHECK(std::abs(herglotz_interior(t, 0.0) - 1.0) < 1e-14);
    const cplx w(0.1, 0.05);
    cplx series = 1.0, wp = 1.0;
    for (int p = 1; p < 30; ++p) {
        wp *= w;
        series += 2.0 * moment_limit(p, t).value * wp;
    }
    CHECK(std::abs(herglotz_interior(t, w) - series) < 1e-13);
    CHECK_THROWS_AS(herglotz_interior(t, 1.0), DomainError);
}

TEST_CASE("critical mus are density values") {
    for (double t : {1.5, 6.0}) {
        CriticalMus c = critical_mus(t);
        CHECK(c.mu_p == Approx(density_limit(t, 0.0)).epsilon(1e-8));
        if (t > 4) {
            REQUIRE(c.mu_r.has_value());
            CHECK(*c.mu_r == Approx(density_limit(t, kPi)).epsilon(1e-8));
        } else {
            CHECK_FALSE(c.mu_r.has_value());
        }
    }
}

TEST_CASE("dip wavenumber laws") {
    CHECK(dip_wavenumber(2.0, 100).exponent == 0.5);
    CHECK(dip_wavenumber(6.0, 100).value == Approx(std::log(100.0) / decay_rate_c(6.0)));
    CHECK(std::isnan(dip_wavenumber(4.0, 100).value));
    CHECK(fourier_terms(6.0) > 10);
    CHECK_THROWS_AS(density_limit(2.0, 0.0, DensityMethod::FOURIER), DomainError);
}

}
