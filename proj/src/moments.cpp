#include "ubmot/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "ubmot/density.hpp"
#include "ubmot/extended.hpp"
#include "ubmot/specfun.hpp"

namespace ubmot {

namespace {

constexpr double kPi = std::numbers::pi;
// Relative error the returned double may carry before we refuse it.
constexpr double kStabilityLimit = 1e-10;

const Ext& ext_eps() {
    static const Ext e = std::numeric_limits<Ext>::epsilon();
    return e;
}

Ext ext_log_q(const EnsembleParams& p) { return -Ext(p.t) / (2 * p.N); }

MomentValue finish(const EnsembleParams& p, int k, MomentForm f, const Ext& value,
                   const Ext& abs_sum, int terms) {
    MomentValue out{to_double(value), k, p.t, p.N, f, 0.0};
    const Ext mag = abs(value);
    const double cond = mag == 0 ? std::numeric_limits<double>::infinity() : to_double(abs_sum / mag);
    const double rel = cond * terms * to_double(ext_eps());
    if (!(rel < kStabilityLimit))
        throw StabilityError(std::string("moment_finite: ") + form_name(f) +
                             " loses too many digits (condition " + std::to_string(cond) + ")");
    out.err_estimate = std::max(rel, std::numeric_limits<double>::epsilon());
    return out;
}

// (N−1+k)!/((N−1)! k!) in Ext, by a product of min(N,k) factors.
Ext hook_binomial(int N, int k) {
    Ext r = 1;
    const int a = std::min(N - 1, k), b = std::max(N - 1, k);
    for (int i = 1; i <= a; ++i) r = r * (b + i) / i;
    return r;
}

MomentValue hyp_form(const EnsembleParams& p, int k, MomentForm f) {
    const Ext lq = ext_log_q(p);
    const int N = p.N;
    switch (f) {
        case MomentForm::A8_FIRST: {
            if (N > 30) throw DomainError("moment_finite: A8_FIRST is limited to N <= 30");
            Ext pre = exp(lq * (Ext(k) * k + Ext(k) * (N - 1))) * hook_binomial(N, k) / N;
            auto s = hyp2f1_terminating_t<Ext>(N - 1, Ext(1 - k), Ext(-(k - 1 + N)), exp(-2 * k * lq));
            return finish(p, k, f, pre * s.value, pre * s.abs_sum, s.terms);
        }
        case MomentForm::A8_SECOND:
        case MomentForm::INTRO_4_0c: {
            Ext e = f == MomentForm::A8_SECOND ? Ext(k) * k + Ext(k) * (N - 1) : Ext(k) * (N + k + 1);
            Ext pre = exp(lq * e);
            auto s = hyp2f1_terminating_t<Ext>(N - 1, Ext(1 - k), Ext(2), 1 - exp(-2 * k * lq));
            return finish(p, k, f, pre * s.value, pre * s.abs_sum, s.terms);
        }
        case MomentForm::A8a: {
            Ext pre = exp(lq * (Ext(k) * k - Ext(k) * (N - 1)));
            auto s = hyp2f1_terminating_t<Ext>(N - 1, Ext(1 + k), Ext(2), 1 - exp(2 * k * lq));
            return finish(p, k, f, pre * s.value, pre * s.abs_sum, s.terms);
        }
        case MomentForm::M1_SUM: {
            // c_p = Γ(N+k−p)/(Γ(k−p)Γ(N−p)Γ(p+1)); c_0 = k (N−1+k)!/((N−1)! k!)
            Ext c = hook_binomial(N, k) * k;
            const Ext growth = exp(-2 * k * lq);
            Ext z = 1, sum = 0, abs_sum = 0;
            const int top = std::min(N, k);
            for (int q = 0; q < top; ++q) {
                Ext term = (q % 2 ? -c : c) * z;
                sum += term;
                abs_sum += abs(term);
                c = c * Ext(k - q - 1) * (N - q - 1) / (Ext(N + k - q - 1) * (q + 1));
                z *= growth;
            }
            Ext pre = exp(lq * (Ext(k) * k + Ext(k) * (N - 1))) / (Ext(k) * N);
            return finish(p, k, f, pre * sum, pre * abs_sum, top);
        }
        case MomentForm::SCHUR_A4: {
            // Σ_r (−1)^r ⟨S_(k−r,1^r)⟩ with the hook averages built in Ext
            const int top = std::min(k - 1, N - 1);
            Ext sum = 0, abs_sum = 0;
            Ext ratio = 1;  // (−1)^r/r! (−k+1)_r (−N+1)_r / (−(k−1+N))_r
            const Ext base = hook_binomial(N, k);
            for (int r = 0; r <= top; ++r) {
                Ext avg = exp(lq * (Ext(k) * k + Ext(k) * (N - 1) - Ext(2 * k) * r)) * base * ratio;
                Ext term = r % 2 ? -avg : avg;
                sum += term;
                abs_sum += abs(term);
                ratio = ratio * -1 / (r + 1) * Ext(-k + 1 + r) * Ext(-N + 1 + r) / Ext(-(k - 1 + N) + r);
            }
            return finish(p, k, f, sum / N, abs_sum / N, top + 1);
        }
        default:
            break;
    }
    throw DomainError("moment_finite: unsupported form");
}

Scaled jacobi_moment_scaled(int N, double k, double t) {
    const double lq = -t / (2.0 * N);
    const double lam2 = std::exp(2.0 * k * lq);
    Scaled P = jacobi_scaled(N - 1, k - N, 1.0, 1.0 - 2.0 * lam2);
    Scaled pre = Scaled::from_log(lq * (k * k - k * (N - 1)) - std::log(double(N)),
                                  ((N - 1) % 2) ? -1 : 1);
    return P * pre;
}

}  // namespace

const char* form_name(MomentForm f) {
    switch (f) {
        case MomentForm::INTRO_4_0c: return "intro-4.0c";
        case MomentForm::A8_FIRST: return "a8-first";
        case MomentForm::A8_SECOND: return "a8";
        case MomentForm::A8a: return "a8a";
        case MomentForm::A8b_JACOBI: return "a8b";
        case MomentForm::M1_SUM: return "m1";
        case MomentForm::SCHUR_A4: return "schur";
        case MomentForm::LIMIT_4_0b: return "limit";
    }
    return "?";
}

MomentForm parse_form(const std::string& s) {
    std::string l;
    for (char c : s) l += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (MomentForm f : {MomentForm::INTRO_4_0c, MomentForm::A8_FIRST, MomentForm::A8_SECOND,
                         MomentForm::A8a, MomentForm::A8b_JACOBI, MomentForm::M1_SUM,
                         MomentForm::SCHUR_A4, MomentForm::LIMIT_4_0b})
        if (l == form_name(f)) return f;
    if (l == "a8-second") return MomentForm::A8_SECOND;
    if (l == "jacobi") return MomentForm::A8b_JACOBI;
    throw DomainError("unknown moment form '" + s + "'");
}

MomentValue moment_finite(const EnsembleParams& p, int k, MomentForm form) {
    if (k < 1) throw DomainError("moment_finite: k must be >= 1");
    if (form == MomentForm::LIMIT_4_0b) return moment_limit(k, p.t);
    if (form == MomentForm::A8b_JACOBI) {
        double v = jacobi_moment_scaled(p.N, k, p.t).to_double();
        return {v, k, p.t, p.N, form, 1e-15 * p.N};
    }
    return hyp_form(p, k, form);
}

double moment_jacobi(int N, double k, double t) {
    if (N < 1) throw DomainError("moment_jacobi: N must be >= 1");
    if (!(k > 0.0)) throw DomainError("moment_jacobi: k must be positive");
    if (!(t >= 0.0)) throw DomainError("moment_jacobi: t must be >= 0");
    return jacobi_moment_scaled(N, k, t).to_double();
}

MomentValue moment_limit(int k, double t) {
    if (k < 1) throw DomainError("moment_limit: k must be >= 1");
    if (!(t >= 0.0)) throw DomainError("moment_limit: t must be >= 0");
    Scaled L = laguerre_scaled(k - 1, 1.0, k * t);
    Scaled v = L * Scaled::from_log(-0.5 * k * t - std::log(double(k)), 1);
    return {v.to_double(), k, t, 0, MomentForm::LIMIT_4_0b, 1e-15 * k};
}

double schur_average(const EnsembleParams& p, const Partition& kappa) {
    const int N = p.N;
    if (static_cast<int>(kappa.size()) > N) throw DomainError("schur_average: more parts than N");
    std::vector<int> kp(N, 0);
    for (size_t i = 0; i < kappa.size(); ++i) {
        if (kappa[i] < 0 || (i > 0 && kappa[i] > kappa[i - 1]))
            throw DomainError("schur_average: not a partition");
        kp[i] = kappa[i];
    }
    double log_v = 0.0;
    for (int j = 1; j <= N; ++j) {
        for (int k = j + 1; k <= N; ++k)
            log_v += std::log(double(k - j + kp[j - 1] - kp[k - 1])) - std::log(double(k - j));
        log_v += p.log_q() * (double(kp[j - 1]) * kp[j - 1] + double(N - 2 * j + 1) * kp[j - 1]);
    }
    return std::exp(log_v);
}

double schur_hook_average(const EnsembleParams& p, int k, int r) {
    const int N = p.N;
    if (k < 1 || r < 0 || r > k - 1 || r > N - 1) throw DomainError("schur_hook_average: bad hook");
    // q^{k²+k(N−1)−2kr} (N−1+k)!/((N−1)!k!) (−1)^r/r! (−k+1)_r(−N+1)_r/(−(k−1+N))_r
    double log_v = p.log_q() * (double(k) * k + double(k) * (N - 1) - 2.0 * k * r) +
                   std::lgamma(N + k) - std::lgamma(N) - std::lgamma(k + 1.0) - std::lgamma(r + 1.0);
    int sign = (r % 2) ? -1 : 1;
    for (int i = 0; i < r; ++i) {
        const double num = double(-k + 1 + i) * double(-N + 1 + i), den = double(-(k - 1 + N) + i);
        log_v += std::log(std::abs(num)) - std::log(std::abs(den));
        if ((num < 0) != (den < 0)) sign = -sign;
    }
    return sign * std::exp(log_v);
}

std::complex<double> schur_eval(const std::vector<std::complex<double>>& z, const Partition& kappa) {
    const int N = static_cast<int>(z.size());
    if (static_cast<int>(kappa.size()) > N) throw DomainError("schur_eval: more parts than points");
    std::complex<double> vdm = 1.0;
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k) {
            if (std::abs(z[j] - z[k]) < 1e-10) throw DomainError("schur_eval: coincident points");
            vdm *= z[j] - z[k];
        }
    Eigen::MatrixXcd m(N, N);
    for (int j = 0; j < N; ++j) {
        const int part = j < static_cast<int>(kappa.size()) ? kappa[j] : 0;
        for (int k = 0; k < N; ++k) m(j, k) = std::pow(z[k], N - 1 - j + part);
    }
    return m.partialPivLu().determinant() / vdm;
}

double t_star(double mu) {
    if (!(mu > 0.0)) throw DomainError("t_star: mu must be positive");
    if (mu == 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 / mu * std::log(std::abs((1.0 + mu) / (1.0 - mu)));
}

const char* regime_name(AsymptoticRegime r) {
    switch (r) {
        case AsymptoticRegime::OSCILLATORY: return "oscillatory";
        case AsymptoticRegime::EXPONENTIAL_DECAY: return "exponential-decay";
        case AsymptoticRegime::CRITICAL: return "critical";
    }
    return "?";
}

AsymptoticMoment moment_asymptotic(double mu, double t, int N) {
    if (!(mu > 0.0)) throw DomainError("moment_asymptotic: mu must be positive");
    if (!(t > 0.0)) throw DomainError("moment_asymptotic: t must be positive");
    if (N < 1) throw DomainError("moment_asymptotic: N must be >= 1");
    AsymptoticMoment out;
    out.mu = mu;
    out.t = t;
    out.t_star = t_star(mu);
    const double lam = std::exp(-0.5 * mu * t);
    const double u = ((mu - 1.0) * (1.0 + lam * lam) + 2.0 * lam * lam) / (2.0 * lam * mu);
    const double e = std::exp(-mu * t);
    const double n15 = std::pow(double(N), -1.5);

    if (std::abs(t - out.t_star) < 1e-6) {
        out.regime = AsymptoticRegime::CRITICAL;
        out.critical_exponent = -4.0 / 3.0;
        return out;
    }
    if (t < out.t_star) {
        if (std::abs(u) > 1.0) throw DomainError("moment_asymptotic: |u| > 1 in the oscillatory regime");
        out.regime = AsymptoticRegime::OSCILLATORY;
        const double phi = std::acos(u);
        // Branch fixed by continuity from h ≈ π + μL₀ at small μ; arg(e^{iφ}−λ)
        // stays in [0, π] since sin φ ≥ 0, so no unwrapping is needed.
        out.h = (mu + 1.0) * phi - 2.0 * std::arg(std::polar(1.0, phi) - lam) + 2.0 * kPi;
        out.envelope = n15 * std::sqrt(2.0 / kPi) * lam / std::sqrt((1.0 - e) * mu) /
                       std::pow((1.0 - e) * ((mu + 1.0) * (mu + 1.0) * e - (mu - 1.0) * (mu - 1.0)), 0.25);
        out.phase = N * out.h + 0.25 * kPi;
        out.value = ((N - 1) % 2 ? -1.0 : 1.0) * out.envelope * std::cos(out.phase);
        return out;
    }
    // Real saddle pair z, 1/z with z + 1/z = 2u; the decay rate is the log
    // modulus of z^μ (1−λz)/(z−λ) at either of them.
    out.regime = AsymptoticRegime::EXPONENTIAL_DECAY;
    const double z = u - std::copysign(std::sqrt(u * u - 1.0), u);
    out.decay_rate = std::abs(mu * std::log(std::abs(z)) + std::log(std::abs(1.0 - lam * z)) -
                              std::log(std::abs(z - lam)));
    out.envelope = n15 * std::sqrt(2.0 / kPi) * lam / std::sqrt(std::abs(1.0 - e) * mu) /
                   std::pow(std::abs((1.0 - e) * ((mu + 1.0) * (mu + 1.0) * e - (mu - 1.0) * (mu - 1.0))), 0.25) *
                   std::exp(-N * out.decay_rate);
    return out;
}

double moment_slope_regime(int k, int N, double t) {
    if (!(t > 0.0 && t < 4.0)) throw DomainError("moment_slope_regime: requires 0 < t < 4");
    if (k < 10 || 10 * k > N) throw DomainError("moment_slope_regime: requires 10 <= k <= N/10");
    return std::sqrt(kPi) * std::pow(double(k), -1.5) * edge_amplitude(t) *
           std::cos(k * support_edge(t) - 0.75 * kPi);
}

}  // namespace ubmot
