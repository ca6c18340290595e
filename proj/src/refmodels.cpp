#include "ubmot/refmodels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ubmot/errors.hpp"
#include "ubmot/specfun.hpp"

namespace ubmot {

namespace {
constexpr double kPi = std::numbers::pi;
}

double gue_wavenumber(int N, double tau_b) { return 2.0 * std::sqrt(2.0 * N) * tau_b; }

double gue_char_avg(int N, double k) {
    if (N < 1) throw DomainError("gue_char_avg: N must be >= 1");
    Scaled L = laguerre_scaled(N - 1, 1.0, 0.5 * k * k);
    if (L.sign() == 0) return 0.0;
    return L.sign() * std::exp(L.log_abs() - 0.25 * k * k);
}

double gue_char_envelope(int N, double tau_b) {
    if (!(tau_b > 0.0)) throw DomainError("gue_char_envelope: tau_b must be positive");
    return 1.0 / (2.0 * std::sqrt(2.0 * kPi * N) * std::pow(tau_b, 1.5));
}

double gue_sff_limit(double tau_b) {
    if (!(tau_b > 0.0)) throw DomainError("gue_sff_limit: tau_b must be positive");
    if (tau_b >= 1.0) return 1.0;
    return 2.0 / kPi * (tau_b * std::sqrt(1.0 - tau_b * tau_b) + std::asin(tau_b));
}

double lue_sff_limit(double k) {
    if (!(k >= 0.0)) throw DomainError("lue_sff_limit: k must be >= 0");
    return std::atan(k);
}

SweepTable gue_drp_curve(int N, const std::vector<double>& tau_grid) {
    if (N < 1) throw DomainError("gue_drp_curve: N must be >= 1");
    SweepTable tab({"tau_b", "k", "sff_term", "moment_term", "value", "method", "err_estimate"});
    for (double tau : tau_grid) {
        const double k = gue_wavenumber(N, tau);
        const double a = N * gue_sff_limit(tau);
        const double m = gue_char_avg(N, k);
        tab.add_row({tau, k, a, m * m, a + m * m, std::string("gue-limit+laguerre"), 0.0});
    }
    return tab;
}

double envelope_dip(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) throw DomainError("envelope_dip: need matching x, y with >= 3 points");
    double best = std::numeric_limits<double>::infinity(), at = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] >= y[i - 1] && y[i] > y[i + 1] && y[i] < best) best = y[i], at = x[i];
    if (std::isnan(at)) throw DomainError("envelope_dip: no local maximum on the grid");
    return at;
}

}  // namespace ubmot
