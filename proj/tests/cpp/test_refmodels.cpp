#include <cmath>

#include "doctest.h"
#include "ubmot/refmodels.hpp"

using namespace ubmot;
using doctest::Approx;

TEST_SUITE("refmodels") {

TEST_CASE("GUE characteristic average") {
    CHECK(gue_char_avg(10, 3.0) == Approx(-0.054224660613793372).epsilon(1e-13));
    CHECK(gue_char_avg(7, 0.0) == Approx(7.0));
    CHECK(gue_wavenumber(8, 0.5) == Approx(4.0));
}

TEST_CASE("limits") {
    CHECK(gue_sff_limit(1.0 - 1e-9) == Approx(1.0).epsilon(1e-4));
    CHECK(gue_sff_limit(1.0) == 1.0);
    CHECK(gue_sff_limit(0.01) == Approx(4 * 0.01 / 3.141592653589793).epsilon(1e-3));
    CHECK(lue_sff_limit(1.0) == Approx(std::atan(1.0)));
}

TEST_CASE("curve and envelope dip") {
    std::vector<double> tau;
    for (int i = 1; i <= 400; ++i) tau.push_back(0.005 * i);
    SweepTable tab = gue_drp_curve(80, tau);
    CHECK(tab.rows().size() == tau.size());
    const double d = envelope_dip(tab.column("tau_b"), tab.column("value"));
    CHECK(d > 0.0);
    CHECK(d < 1.0);
    // synthetic: maxima at 1, 3, 5 with heights 4, 2, 5
    std::vector<double> x{0, 1, 2, 3, 4, 5, 6}, y{0, 4, 1, 2, 0, 5, 0};
    CHECK(envelope_dip(x, y) == 3.0);
}

}
