#pragma once

#include <string>
#include <vector>

#include "ubmot/ensemble.hpp"
#include "ubmot/table.hpp"

namespace ubmot {

enum class SffRegime { FINITE_N, FIXED_K_LIMIT, SCALED_LIMIT };
const char* regime_name(SffRegime r);

enum class SffMethod { AUTO, DOUBLE_SUM, INTEGRAL };

struct SffValue {
    double k_or_mu = 0.0;
    double t = 0.0;
    SffRegime regime = SffRegime::FINITE_N;
    int N = 0;  // FINITE_N only
    double value = 0.0;
    std::string method;
    double err_estimate = 0.0;  // absolute
};

// S_N(k;t), k ≠ 0 (sign ignored).  DOUBLE_SUM is the closed double sum in
// Ext and throws StabilityError when its terms are too large for Ext to
// resolve the difference; AUTO then uses the moment integral instead.
SffValue sff_exact(const EnsembleParams& p, long k, SffMethod method = SffMethod::AUTO);

// min(k,N) − k⁴ ∫₀^∞ s m_k^{(N)}(t+s)² ds.
SffValue sff_integral_form(const EnsembleParams& p, long k);

// min(k,N) − S_N(k;t) from the same integral; no cancellation, so it stays
// accurate when S_N is within rounding of min(k,N).
double sff_deficit(const EnsembleParams& p, long k);

// N → ∞ at fixed k.  value is the Laguerre sum; err_estimate is its distance
// to the quadrature form.
SffValue sff_fixed_k_limit(int k, double t);
double sff_fixed_k_sum(int k, double t);
double sff_fixed_k_integral(int k, double t);

// lim S_N(μN;t)/N.
SffValue sff_scaled_limit(double mu, double t);

// ∫₀^{t*−t} s e^{−μs} (1−e^{−μ(s+t)})^{−3/2} (e^{−μ(s+t)} − e^{−μt*})^{−1/2} ds
double ramp_deficit_integral(double mu, double t, double* err = nullptr);

// Same integrand at μ = 1, t = 0 with t* replaced by T; equals π(1 + tanh(T/4)).
double sum_rule_integral(double T, double* err = nullptr);

SffValue sff_heuristic(double mu, double t);

// N − ∬ e^{ik(x−y)} K(x,y) K(y,x) on a periodic grid; N ≤ 8.
SffValue sff_kernel_oracle(const EnsembleParams& p, long k);

// Columns mu, k, sff_term, moment_term, value, method, err_estimate.
SweepTable drp_curve(int N, double t, const std::vector<double>& mu_grid);

struct DipFeatures {
    double mu_dip = 0.0;
    double min_value = 0.0;
    // Largest log10(value / sff_term) after the first local minimum: how far
    // the moment oscillations poke above the ramp once the dip is passed.
    double post_dip_height = 0.0;
};

DipFeatures dip_features(const SweepTable& drp);

}  // namespace ubmot
