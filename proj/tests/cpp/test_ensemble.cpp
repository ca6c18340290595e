#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ubmot/ensemble.hpp"
#include "ubmot/moments.hpp"

using namespace ubmot;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("ensemble") {

TEST_CASE("params") {
    auto p = EnsembleParams::make(8, 2.0);
    CHECK(p.q == Approx(std::exp(-2.0 / 16)).epsilon(1e-15));
    CHECK(p.center() == 3.5);
    CHECK_THROWS_AS(EnsembleParams::make(0, 1.0), DomainError);
    CHECK_THROWS_AS(EnsembleParams::make(3, -1.0), DomainError);
}

TEST_CASE("spherical weight is symmetric about the centre") {
    auto p = EnsembleParams::make(7, 1.3);
    for (long s = -4; s < 12; ++s) CHECK(spherical_weight(p, s) == Approx(spherical_weight(p, 6 - s)).epsilon(1e-15));
    CHECK(spherical_weight(p, 3) == 1.0);
}

TEST_CASE("kernel is a reproducing projection with trace N") {
    for (int N : {2, 5}) {
        auto p = EnsembleParams::make(N, 1.5);
        CorrelationKernel K(p);
        const int M = 4 * (K.max_frequency() + 1) + 8;
        std::vector<double> zs;
        for (int i = 0; i < M; ++i) zs.push_back(-kPi + 2 * kPi * i / M);
        for (double x : {-2.0, 0.3})
            for (double y : {-0.4, 2.9}) {
                cplx s = 0.0;
                for (double z : zs) s += K(x, z) * K(z, y);
                CHECK(std::abs(s * (2 * kPi / M) - K(x, y)) < 1e-11);
            }
        double tr = 0.0;
        for (double z : zs) {
            CHECK(std::abs(K(z, z).imag()) < 1e-12);
            CHECK(K(z, z).real() == Approx(K.density(z)).epsilon(1e-11));
            tr += K.density(z);
        }
        CHECK(tr * 2 * kPi / M == Approx(N).epsilon(1e-12));
        CHECK(density_finite_N(p, 0.3) == Approx(K.density(0.3)).epsilon(1e-13));
        CHECK(std::abs(kernel(p, 0.3, -1.0) - K(0.3, -1.0)) < 1e-13);
    }
}

TEST_CASE("kernel density reproduces the moments") {
    auto p = EnsembleParams::make(4, 2.0);
    CorrelationKernel K(p);
    const int M = 4 * (K.max_frequency() + 1);
    for (int k = 1; k <= 3; ++k) {
        double s = 0.0;
        for (int i = 0; i < M; ++i) {
            const double x = -kPi + 2 * kPi * i / M;
            s += K.density(x) * std::cos(k * x);
        }
        CHECK(s * 2 * kPi / M / 4 == Approx(moment_finite(p, k).value).epsilon(1e-10));
    }
}

TEST_CASE("biorthogonal functions") {
    auto p = EnsembleParams::make(3, 1.0);
    // P_0 = 1/Sw(0); P_j has degree j
    CHECK(std::abs(biorth_P(p, 0, {0.3, 0.2}) - 1.0 / spherical_weight(p, 0)) < 1e-14);
    CHECK_THROWS_AS(biorth_P(p, 3, 1.0), DomainError);
    CHECK_THROWS_AS(biorth_Q(p, 0, 1.0, 1, 1e-15), WindowTooSmall);
    const int L = kernel_window(p);
    CHECK(L >= 1);
    CHECK(std::isfinite(std::abs(biorth_Q(p, 2, std::polar(1.0, 0.4), L))));
}

TEST_CASE("tiny-N pdf is normalized") {
    const int n = 64;
    for (double t : {0.7, 3.0}) {
        auto p = EnsembleParams::make(2, t);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s += pdf_identity_start(p, {-kPi + 2 * kPi * (i + 0.5) / n, -kPi + 2 * kPi * (j + 0.5) / n});
        CHECK(s * std::pow(2 * kPi / n, 2) == Approx(1.0).epsilon(1e-8));
    }
    CHECK_THROWS_AS(pdf_identity_start(EnsembleParams::make(4, 1.0), {0, 0, 0, 0}), DomainError);
}

}
