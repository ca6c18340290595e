#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ubmot/ensemble.hpp"

namespace ubmot {

enum class MomentForm { INTRO_4_0c, A8_FIRST, A8_SECOND, A8a, A8b_JACOBI, M1_SUM, SCHUR_A4, LIMIT_4_0b };

const char* form_name(MomentForm f);
MomentForm parse_form(const std::string& s);

struct MomentValue {
    double value = 0.0;
    int k = 0;
    double t = 0.0;
    int N = 0;  // 0 for the N → ∞ limit
    MomentForm form = MomentForm::A8b_JACOBI;
    double err_estimate = 0.0;  // relative
};

// m_k^{(N)}(t).  The monomial-basis forms are summed in Ext and throw
// StabilityError if the condition estimate says the double result would keep
// fewer than ten correct digits.  INTRO_4_0c carries a prefactor that is off
// by q^{2k}; it is kept only so that the discrepancy can be demonstrated.
MomentValue moment_finite(const EnsembleParams& p, int k, MomentForm form = MomentForm::A8b_JACOBI);

// Jacobi form at real k (k = μN need not be an integer).
double moment_jacobi(int N, double k, double t);

MomentValue moment_limit(int k, double t);

using Partition = std::vector<int>;

double schur_average(const EnsembleParams& p, const Partition& kappa);
// ⟨S_{(k−r,1^r)}⟩ from the hook closed form.
double schur_hook_average(const EnsembleParams& p, int k, int r);
std::complex<double> schur_eval(const std::vector<std::complex<double>>& z, const Partition& kappa);

double t_star(double mu);

enum class AsymptoticRegime { OSCILLATORY, EXPONENTIAL_DECAY, CRITICAL };
const char* regime_name(AsymptoticRegime r);

struct AsymptoticMoment {
    double mu = 0.0;
    double t = 0.0;
    double t_star = 0.0;
    double envelope = 0.0;
    double phase = 0.0;       // N h̃ + π/4 (oscillatory regime)
    double h = 0.0;           // h̃(t, μ)
    double decay_rate = 0.0;  // per unit N (exponential regime)
    double critical_exponent = 0.0;
    AsymptoticRegime regime = AsymptoticRegime::OSCILLATORY;
    std::optional<double> value;
};

AsymptoticMoment moment_asymptotic(double mu, double t, int N);

// √π k^{−3/2} A(t) cos(k L₀(t) − 3π/4), for t < 4 and 10 ≤ k ≤ N/10.
double moment_slope_regime(int k, int N, double t);

}  // namespace ubmot
