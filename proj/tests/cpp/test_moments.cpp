#include <cmath>

#include "doctest.h"
#include "ubmot/moments.hpp"

using namespace ubmot;
using doctest::Approx;

TEST_SUITE("moments") {

TEST_CASE("reference values") {
    struct Ref {
        int N, k;
        double t, m;
    };
    for (Ref r : {Ref{30, 7, 3.6, 0.016107194885171968}, Ref{10, 25, 0.5, -0.0055679099541118384},
                  Ref{20, 20, 8, -0.00079721693574251838}, Ref{1, 3, 2, 0.00012340980408667955}}) {
        auto p = EnsembleParams::make(r.N, r.t);
        CAPTURE(r.N);
        CAPTURE(r.k);
        CHECK(moment_finite(p, r.k).value == Approx(r.m).epsilon(1e-12));
    }
    CHECK(moment_jacobi(10, 4.5, 2.0) == Approx(-0.038948578812342148).epsilon(1e-12));
    CHECK(moment_limit(5, 2.0).value == Approx(-0.015721876331199423).epsilon(1e-13));
    CHECK(moment_limit(40, 6.0).value == Approx(-2.1171126651326429e-11).epsilon(1e-11));
}

TEST_CASE("first moment and N = 1") {
    for (double t : {0.1, 1.0, 5.0})
        for (int N : {1, 3, 17}) CHECK(moment_finite(EnsembleParams::make(N, t), 1).value == Approx(std::exp(-t / 2)).epsilon(1e-14));
    auto p = EnsembleParams::make(1, 0.8);
    for (int k = 1; k < 8; ++k) CHECK(moment_finite(p, k).value == Approx(std::pow(p.q, k * k)).epsilon(1e-13));
}

TEST_CASE("moment forms agree") {
    for (double t : {0.5, 3.6})
        for (int N : {4, 12})
            for (int k : {2, 7, 15}) {
                auto p = EnsembleParams::make(N, t);
                const double ref = moment_finite(p, k).value;
                for (MomentForm f : {MomentForm::A8_SECOND, MomentForm::A8a, MomentForm::M1_SUM, MomentForm::SCHUR_A4}) {
                    CAPTURE(form_name(f));
                    CHECK(moment_finite(p, k, f).value == Approx(ref).epsilon(1e-9));
                }
            }
}

TEST_CASE("the intro-form prefactor is off by q^{2k}") {
    auto p = EnsembleParams::make(5, 2.0);
    for (int k : {1, 3})
        CHECK(moment_finite(p, k, MomentForm::INTRO_4_0c).value ==
              Approx(std::pow(p.q, 2 * k) * moment_finite(p, k).value).epsilon(1e-12));
}

TEST_CASE("real-k Jacobi form matches integer k") {
    for (int k : {1, 5, 11}) CHECK(moment_jacobi(9, k, 1.7) == Approx(moment_finite(EnsembleParams::make(9, 1.7), k).value).epsilon(1e-12));
}

TEST_CASE("large N approaches the limit") {
    const double lim = moment_limit(3, 2.0).value;
    double prev = 1.0;
    for (int N : {50, 100, 200}) {
        const double d = std::abs(moment_finite(EnsembleParams::make(N, 2.0), 3).value - lim);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("Schur averages") {
    auto p = EnsembleParams::make(5, 1.2);
    for (int r = 0; r < 4; ++r) {
        Partition hook(1, 4 - r);
        for (int i = 0; i < r; ++i) hook.push_back(1);
        CHECK(schur_hook_average(p, 4, r) == Approx(schur_average(p, hook)).epsilon(1e-12));
    }
    // p_k = Σ_r (−1)^r S_{(k−r,1^r)}
    double s = 0.0;
    for (int r = 0; r < 4; ++r) s += (r % 2 ? -1 : 1) * schur_hook_average(p, 4, r);
    CHECK(s / 5 == Approx(moment_finite(p, 4).value).epsilon(1e-12));
    // s_(2,1)(1,2,3) = Σ_{i≠j} x_i² x_j + 2 x_1 x_2 x_3
    CHECK(std::abs(schur_eval({1.0, 2.0, 3.0}, {2, 1}) - 60.0) < 1e-12);
    CHECK_THROWS_AS(schur_average(p, {1, 2}), DomainError);
}

TEST_CASE("form names round-trip") {
    for (MomentForm f : {MomentForm::INTRO_4_0c, MomentForm::A8_FIRST, MomentForm::A8_SECOND, MomentForm::A8a,
                         MomentForm::A8b_JACOBI, MomentForm::M1_SUM, MomentForm::SCHUR_A4, MomentForm::LIMIT_4_0b})
        CHECK(parse_form(form_name(f)) == f);
    CHECK_THROWS_AS(parse_form("nope"), DomainError);
}

TEST_CASE("t_star and regimes") {
    CHECK(t_star(0.5) == Approx(4 * std::log(3.0)).epsilon(1e-15));
    CHECK(std::isinf(t_star(1.0)));
    CHECK(moment_asymptotic(0.5, 1.0, 400).regime == AsymptoticRegime::OSCILLATORY);
    CHECK(moment_asymptotic(0.5, 6.0, 400).regime == AsymptoticRegime::EXPONENTIAL_DECAY);
    CHECK(moment_asymptotic(0.5, t_star(0.5), 400).regime == AsymptoticRegime::CRITICAL);
    CHECK(moment_asymptotic(0.5, 6.0, 400).decay_rate > 0.0);
}

TEST_CASE("oscillatory asymptotics track the exact moment") {
    const int N = 400;
    auto a = moment_asymptotic(0.5, 1.0, N);
    REQUIRE(a.value.has_value());
    const double m = moment_finite(EnsembleParams::make(N, 1.0), N / 2).value;
    CHECK(std::abs(*a.value - m) < 0.01 * a.envelope);
}

TEST_CASE("slope regime") {
    const double m = moment_finite(EnsembleParams::make(2000, 2.0), 40).value;
    const double env = std::sqrt(3.141592653589793) * std::pow(40.0, -1.5) * 0.22507907903927651;
    CHECK(std::abs(moment_slope_regime(40, 2000, 2.0) - m) < 0.1 * env);
}

}
