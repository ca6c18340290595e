#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ubmot/errors.hpp"
#include "ubmot/quadrature.hpp"

using namespace ubmot;
using doctest::Approx;

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Legendre rules") {
    for (int n : {1, 5, 20, 64}) {
        const GaussRule& g = gauss_legendre(n);
        REQUIRE(g.x.size() == size_t(n));
        double w = 0.0;
        for (double v : g.w) w += v;
        CHECK(w == Approx(2.0).epsilon(1e-14));
        // exact for degree 2n − 1
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += g.w[i] * std::pow(g.x[i], 2 * n - 2);
        CHECK(s == Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
    }
}

TEST_CASE("fixed rule on smooth integrand") {
    CHECK(integrate_fixed([](double x) { return std::exp(x); }, 0.0, 1.0, 12) ==
          Approx(std::numbers::e - 1.0).epsilon(1e-15));
}

TEST_CASE("adaptive handles endpoint singularities") {
    // error on [0, h] shrinks only like √h, so |halves − whole| undershoots
    // the true error of the halves by 1/(√2 − 1)
    QuadResult r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9, 0.0, 20, 60);
    CHECK(std::abs(r.value - 2.0) < 2.5 * r.error);
    CHECK(std::abs(r.value - 2.0) < 5e-9);
    r = integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0, 1e-12);
    CHECK(r.value == Approx(-1.0).epsilon(1e-11));
    CHECK(r.error <= 1e-11);
}

TEST_CASE("adaptive throws on a divergent integral") {
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12, 0.0, 20, 12),
                    ConvergenceError);
}

TEST_CASE("order doubling") {
    QuadResult r = integrate_doubling([](double x) { return std::cos(40 * x); }, 0.0, 1.0, 1e-13);
    CHECK(r.value == Approx(std::sin(40.0) / 40.0).epsilon(1e-12));
}

}
