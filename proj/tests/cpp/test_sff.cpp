#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ubmot/moments.hpp"
#include "ubmot/sff.hpp"

using namespace ubmot;
using doctest::Approx;

TEST_SUITE("sff") {

TEST_CASE("reference values") {
    struct Ref {
        int N;
        long k;
        double t, S;
    };
    for (Ref r : {Ref{10, 5, 2, 4.0230387267233142}, Ref{3, 5, 1, 2.7297151737546474},
                  Ref{4, 6, 1, 3.3005806846889257}, Ref{20, 13, 2.5, 11.174360663776482}}) {
        auto p = EnsembleParams::make(r.N, r.t);
        CAPTURE(r.N);
        CAPTURE(r.k);
        CHECK(sff_exact(p, r.k).value == Approx(r.S).epsilon(1e-12));
        CHECK(sff_integral_form(p, r.k).value == Approx(r.S).epsilon(1e-10));
    }
}

TEST_CASE("k = 1 and k = 2 closed forms") {
    for (int N : {1, 4, 16})
        for (double t : {0.3, 2.0, 7.0}) {
            auto p = EnsembleParams::make(N, t);
            CHECK(std::abs(sff_exact(p, 1).value - (1 - std::exp(-t))) < 1e-12);
            const double n2 = double(N) * N;
            const double s2 = N >= 2 ? 2 - std::exp(-2 * t) * (n2 * std::exp(-2 * t / N) - 2 * (n2 - 1) + n2 * std::exp(2 * t / N))
                                     : 1 - std::exp(-4 * t);
            CHECK(sff_exact(p, 2).value == Approx(s2).epsilon(1e-10));
        }
}

TEST_CASE("t = 0 gives zero and the sign of k is ignored") {
    for (int N : {2, 7, 20})
        for (long k : {1L, 5L, 19L}) CHECK(std::abs(sff_exact(EnsembleParams::make(N, 0.0), k).value) < 1e-8);
    auto p = EnsembleParams::make(6, 1.1);
    CHECK(sff_exact(p, -4).value == sff_exact(p, 4).value);
    CHECK_THROWS_AS(sff_exact(p, 0), DomainError);
}

TEST_CASE("variance is nonnegative and the deficit matches") {
    for (double t : {0.2, 1.0, 4.0})
        for (long k : {1L, 3L, 9L, 25L}) {
            auto p = EnsembleParams::make(8, t);
            const double s = sff_exact(p, k).value;
            CHECK(s >= -1e-12);
            CHECK(sff_deficit(p, k) == Approx(std::min<long>(k, 8) - s).epsilon(1e-9));
        }
}

TEST_CASE("double sum and kernel oracle agree") {
    for (long k : {1L, 3L, 6L}) {
        auto p = EnsembleParams::make(5, 1.4);
        CHECK(sff_kernel_oracle(p, k).value == Approx(sff_exact(p, k, SffMethod::DOUBLE_SUM).value).epsilon(1e-10));
    }
}

TEST_CASE("fixed-k limit") {
    CHECK(sff_fixed_k_limit(3, 1.0).value == Approx(1.8424506604471633).epsilon(1e-13));
    CHECK(sff_fixed_k_sum(7, 0.4) == Approx(2.7778293216058662).epsilon(1e-13));
    for (int k : {1, 4, 12}) CHECK(sff_fixed_k_integral(k, 1.5) == Approx(sff_fixed_k_sum(k, 1.5)).epsilon(1e-10));
    CHECK(sff_fixed_k_sum(1, 2.0) == Approx(1 - std::exp(-2.0)).epsilon(1e-15));
}

TEST_CASE("scaled limit") {
    CHECK(sff_scaled_limit(0.25, 2).value == Approx(0.20374419046635405).epsilon(1e-12));
    CHECK(sff_scaled_limit(1.5, 0.5).value == Approx(0.62994258928740481).epsilon(1e-12));
    CHECK(sff_scaled_limit(0.9, 3).value == Approx(0.78826987331961966).epsilon(1e-12));
    // ramp and plateau exactly
    CHECK(sff_scaled_limit(0.1, 6).value == 0.1);
    CHECK(sff_scaled_limit(2, 2).value == 1.0);
    // never above min(μ, 1), nondecreasing in μ
    double prev = 0.0;
    for (double mu = 0.05; mu < 2.5; mu += 0.15) {
        const double v = sff_scaled_limit(mu, 1.0).value;
        CHECK(v <= std::min(mu, 1.0) + 1e-15);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
}

TEST_CASE("sum rule") {
    for (double T : {0.5, 2.0, 8.0}) CHECK(std::abs(sum_rule_integral(T) - std::numbers::pi * (1 + std::tanh(T / 4))) < 1e-9);
}

TEST_CASE("heuristic is close to the limit") {
    for (double mu : {0.3, 0.8, 1.4}) CHECK(std::abs(sff_heuristic(mu, 2.0).value - sff_scaled_limit(mu, 2.0).value) < 0.1);
}

TEST_CASE("dip ramp plateau curve") {
    std::vector<double> mus;
    for (int i = 1; i <= 60; ++i) mus.push_back(0.035 * i);
    SweepTable tab = drp_curve(20, 2.0, mus);
    CHECK(tab.rows().size() == mus.size());
    for (size_t i = 0; i < mus.size(); ++i)
        CHECK(tab.number(i, "value") == Approx(tab.number(i, "sff_term") + tab.number(i, "moment_term")));
    DipFeatures d = dip_features(tab);
    CHECK(d.mu_dip > 0.0);
    CHECK(d.mu_dip < 1.0);
}

}
