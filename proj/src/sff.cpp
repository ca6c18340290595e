#include "ubmot/sff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ubmot/density.hpp"
#include "ubmot/errors.hpp"
#include "ubmot/extended.hpp"
#include "ubmot/moments.hpp"
#include "ubmot/quadrature.hpp"
#include "ubmot/specfun.hpp"

namespace ubmot {

namespace {

constexpr double kPi = std::numbers::pi;

// Ext keeps ~100 digits; refuse anything that would leave fewer than ten in
// the difference min(k,N) − Σ.
const double kExtDigits = 100.0 * std::log(10.0);

SffValue finite(const EnsembleParams& p, long k, double v, const char* method, double err) {
    SffValue s;
    s.k_or_mu = double(k);
    s.t = p.t;
    s.regime = SffRegime::FINITE_N;
    s.N = p.N;
    s.value = v;
    s.method = method;
    s.err_estimate = err;
    return s;
}

SffValue double_sum(const EnsembleParams& p, long k) {
    const int N = p.N;
    const long n = std::min<long>(k, N);
    const double lq = p.log_q();
    const double log_pref = (2.0 * k * k + 2.0 * k * (N - 1.0)) * lq;
    double worst = -std::numeric_limits<double>::infinity();
    for (long j = 0; j < n; ++j) {
        const double lc = -2.0 * k * j * lq + std::lgamma(double(N + k - j)) - std::lgamma(double(N - j)) -
                          std::lgamma(j + 1.0) - std::lgamma(double(k - j));
        worst = std::max(worst, 2.0 * lc);
    }
    // denominators are ≥ 1, so this bounds every term
    if (worst + log_pref + 2.0 * std::log(double(n)) > kExtDigits + std::log(1e-10))
        throw StabilityError("sff_exact: double sum needs more than the available extended precision");

    const Ext elq = -Ext(p.t) / (2 * N);
    const Ext x = exp(-2 * Ext(k) * elq);
    std::vector<Ext> c(n);
    // c_0 = Γ(N+k)/(Γ(N)Γ(k)) = k·C(N+k−1, k)
    Ext c0 = k;
    for (long i = 1; i <= std::min<long>(k, N - 1); ++i) c0 = c0 * Ext(N + k - i) / Ext(std::min<long>(k, N - 1) - i + 1);
    c[0] = c0;
    for (long j = 0; j + 1 < n; ++j)
        c[j + 1] = -c[j] * x * Ext(N - 1 - j) * Ext(k - 1 - j) / (Ext(N + k - 1 - j) * Ext(j + 1));

    Ext sum = 0, abs_sum = 0;
    for (long j = 0; j < n; ++j) {
        Ext u = Ext(N + k - 1 - 2 * j);
        Ext d = c[j] * c[j] / (u * u);
        sum += d;
        abs_sum += d;
        for (long l = j + 1; l < n; ++l) {
            Ext v = Ext(N + k - 1 - j - l);
            Ext term = 2 * c[j] * c[l] / (v * v);
            sum += term;
            abs_sum += abs(term);
        }
    }
    const Ext pref = exp(elq * (2 * Ext(k) * k + 2 * Ext(k) * (N - 1)));
    const double value = to_double(Ext(n) - pref * sum);
    const double err = to_double(pref * abs_sum * std::numeric_limits<Ext>::epsilon()) * double(n) * n + 1e-16 * n;
    if (err > 1e-10 * std::max(std::abs(value), 1e-3))
        throw StabilityError("sff_exact: cancellation in the double sum exceeds the tolerance");
    return finite(p, k, value, "double-sum", err);
}

// ∫_a^∞ f(s) ds: adaptive on [a, a+len] and the tail through u = e^{−(s−a−len)/σ}.
QuadResult semi_infinite(const std::function<double(double)>& f, double a, double len, double sigma,
                         double rel_tol, double abs_tol) {
    QuadResult head = integrate_adaptive(f, a, a + len, rel_tol, abs_tol);
    const double b = a + len;
    auto g = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double v = f(b - sigma * std::log(u));
        return v == 0.0 ? 0.0 : sigma * v / u;
    };
    QuadResult tail = integrate_adaptive(g, 0.0, 1.0, rel_tol, abs_tol);
    return {head.value + tail.value, head.error + tail.error, head.panels + tail.panels};
}

}  // namespace

const char* regime_name(SffRegime r) {
    switch (r) {
        case SffRegime::FINITE_N: return "finite-N";
        case SffRegime::FIXED_K_LIMIT: return "fixed-k-limit";
        case SffRegime::SCALED_LIMIT: return "scaled-limit";
    }
    return "?";
}

namespace {

QuadResult moment_sq_integral(const EnsembleParams& p, long k) {
    const int N = p.N;
    const double mu = double(k) / N;
    const double ts = t_star(mu);
    const double len = std::min(std::max(0.0, ts - p.t), 50.0) + 4.0;
    // m² decays like e^{−r s} once past t*
    const double r = double(k) * (std::abs(N - k) + 1.0) / N;
    auto f = [&](double s) {
        const double m = moment_jacobi(N, double(k), p.t + s);
        return s * m * m;
    };
    const double k4 = std::pow(double(k), 4);
    return semi_infinite(f, 0.0, len, 2.0 / r, 1e-12, 1e-13 * std::min<long>(k, N) / k4);
}

}  // namespace

SffValue sff_integral_form(const EnsembleParams& p, long k) {
    k = std::abs(k);
    if (k < 1) throw DomainError("sff_integral_form: k must be nonzero");
    const long n = std::min<long>(k, p.N);
    const double k4 = std::pow(double(k), 4);
    QuadResult q = moment_sq_integral(p, k);
    return finite(p, k, double(n) - k4 * q.value, "integral", k4 * q.error + 1e-15 * n);
}

double sff_deficit(const EnsembleParams& p, long k) {
    k = std::abs(k);
    if (k < 1) throw DomainError("sff_deficit: k must be nonzero");
    return std::pow(double(k), 4) * moment_sq_integral(p, k).value;
}

SffValue sff_exact(const EnsembleParams& p, long k, SffMethod method) {
    k = std::abs(k);
    if (k < 1) throw DomainError("sff_exact: k must be nonzero");
    switch (method) {
        case SffMethod::DOUBLE_SUM: return double_sum(p, k);
        case SffMethod::INTEGRAL: return sff_integral_form(p, k);
        case SffMethod::AUTO:
            try {
                return double_sum(p, k);
            } catch (const StabilityError&) {
                return sff_integral_form(p, k);
            }
    }
    throw DomainError("sff_exact: unknown method");
}

double sff_fixed_k_sum(int k, double t) {
    if (k < 1) throw DomainError("sff_fixed_k_sum: k must be >= 1");
    if (!(t >= 0.0)) throw DomainError("sff_fixed_k_sum: t must be >= 0");
    double s = 0.0;
    for (int j = 0; j < k; ++j) {
        Scaled L = laguerre_scaled(j, -1.0, k * t);
        if (L.sign() == 0) continue;
        s += (k - j) * std::exp(2.0 * L.log_abs() - k * t);
    }
    return k - s;
}

double sff_fixed_k_integral(int k, double t) {
    if (k < 1) throw DomainError("sff_fixed_k_integral: k must be >= 1");
    if (!(t >= 0.0)) throw DomainError("sff_fixed_k_integral: t must be >= 0");
    const double x0 = k * t;
    auto f = [&](double s) {
        Scaled L = laguerre_scaled(k - 1, 1.0, x0 + s);
        if (L.sign() == 0 || s == 0.0) return 0.0;
        return s * std::exp(2.0 * L.log_abs() - x0 - s);
    };
    QuadResult q = semi_infinite(f, 0.0, 4.0 * k + 2.0 * x0 + 20.0, 2.0, 1e-13, 1e-15);
    return k - q.value;
}

SffValue sff_fixed_k_limit(int k, double t) {
    SffValue s;
    s.k_or_mu = k;
    s.t = t;
    s.regime = SffRegime::FIXED_K_LIMIT;
    s.value = sff_fixed_k_sum(k, t);
    s.method = "laguerre-sum";
    s.err_estimate = std::abs(s.value - sff_fixed_k_integral(k, t));
    return s;
}

namespace {

double deficit(double mu, double t, double ts, double* err) {
    if (err) *err = 0.0;
    if (t >= ts) return 0.0;
    // y = e^{−μ(s+t)} runs from y0 down to E; the integral becomes
    // ∫_E^{y0} s(y) e^{μt} / (μ (1−y)^{3/2} √(y−E)) dy.  The lower half takes
    // v² = y − E, the upper half w² = 1 − y (which tames the t → 0 end).
    const double E = std::isinf(ts) ? 0.0 : std::exp(-mu * ts);
    const double y0 = std::exp(-mu * t);
    const double ym = 0.5 * (E + y0);
    const double emt = std::exp(mu * t);
    auto s_of = [&](double y) { return std::max(0.0, -std::log(y) / mu - t); };
    auto lower = [&](double v) {
        const double y = E + v * v;
        if (y <= 0.0) return 0.0;
        return 2.0 * s_of(y) * emt / (mu * std::pow(1.0 - y, 1.5));
    };
    auto upper = [&](double w) {
        const double w2 = w * w;
        const double y = 1.0 - w2;
        const double s = std::max(0.0, -std::log1p(-w2) / mu - t);
        return 2.0 * s * emt / (mu * w2 * std::sqrt(y - E));
    };
    auto run = [&](const std::function<double(double)>& f, double a, double b) {
        try {
            return integrate_doubling(f, a, b, 1e-13, 32, 1024);
        } catch (const ConvergenceError&) {
            // only when E is tiny (μ near 1) and s(y) has a near-log endpoint
            return integrate_adaptive(f, a, b, 1e-13, 1e-15);
        }
    };
    QuadResult a = run(lower, 0.0, std::sqrt(ym - E));
    QuadResult b = run(upper, std::sqrt(1.0 - y0), std::sqrt(1.0 - ym));
    if (err) *err = a.error + b.error;
    return a.value + b.value;
}

}  // namespace

double ramp_deficit_integral(double mu, double t, double* err) {
    if (!(mu > 0.0)) throw DomainError("ramp_deficit_integral: mu must be positive");
    if (!(t >= 0.0)) throw DomainError("ramp_deficit_integral: t must be >= 0");
    return deficit(mu, t, t_star(mu), err);
}

double sum_rule_integral(double T, double* err) {
    if (!(T > 0.0)) throw DomainError("sum_rule_integral: T must be positive");
    return deficit(1.0, 0.0, T, err);
}

SffValue sff_scaled_limit(double mu, double t) {
    if (!(mu > 0.0)) throw DomainError("sff_scaled_limit: mu must be positive");
    if (!(t > 0.0)) throw DomainError("sff_scaled_limit: t must be positive");
    SffValue s;
    s.k_or_mu = mu;
    s.t = t;
    s.regime = SffRegime::SCALED_LIMIT;
    const double base = std::min(mu, 1.0);
    if (t >= t_star(mu)) {
        s.value = base;
        s.method = mu < 1.0 ? "ramp" : "plateau";
        return s;
    }
    double err = 0.0;
    const double I = ramp_deficit_integral(mu, t, &err);
    const double c = mu * mu * mu / (kPi * (mu + 1.0)) * std::exp(-mu * t);
    s.value = base - c * I;
    s.method = "scaled-quadrature";
    s.err_estimate = c * err;
    return s;
}

SffValue sff_heuristic(double mu, double t) {
    if (!(mu > 0.0)) throw DomainError("sff_heuristic: mu must be positive");
    if (!(t > 0.0)) throw DomainError("sff_heuristic: t must be positive");
    SffValue s;
    s.k_or_mu = mu;
    s.t = t;
    s.regime = SffRegime::SCALED_LIMIT;
    const double rho0 = herglotz_solve(t, 0.0).real();
    const double rho_pi = t > 4.0 ? herglotz_solve(t, kPi).real() : 0.0;
    if (mu >= rho0) {
        s.value = 1.0;
        s.method = "heuristic-plateau";
        return s;
    }
    if (mu <= rho_pi) {
        s.value = mu;
        s.method = "heuristic-ramp";
        return s;
    }
    double lo = 0.0, hi = kPi;
    while (hi - lo > 1e-13) {
        const double m = 0.5 * (lo + hi);
        (herglotz_solve(t, m).real() > mu ? lo : hi) = m;
    }
    const double us = 0.5 * (lo + hi);
    auto quad = [&](int n) {
        const GaussRule& r = gauss_legendre(n);
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = 0.5 * us * (r.x[i] + 1.0);
        auto H = herglotz_solve(t, xs);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += r.w[i] * (H[i].real() - mu);
        return 0.5 * us * acc;
    };
    double prev = quad(32), cur = prev;
    for (int n = 64; n <= 512; n *= 2) {
        cur = quad(n);
        if (std::abs(cur - prev) < 1e-12) break;
        prev = cur;
    }
    s.value = 1.0 - cur / kPi;
    s.method = "heuristic";
    s.err_estimate = std::abs(cur - prev) / kPi + 1e-13;
    return s;
}

SffValue sff_kernel_oracle(const EnsembleParams& p, long k) {
    k = std::abs(k);
    if (p.N > 8) throw DomainError("sff_kernel_oracle: limited to N <= 8");
    if (k < 1) throw DomainError("sff_kernel_oracle: k must be nonzero");
    CorrelationKernel K(p);
    // the integrand is a trigonometric polynomial of degree < M in each variable
    const int M = 4 * (p.N + K.l_window()) + 2 * static_cast<int>(k);
    const double h = 2.0 * kPi / M;
    std::vector<cplx> Kxy(size_t(M) * M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) Kxy[size_t(i) * M + j] = K(-kPi + i * h, -kPi + j * h);
    double acc = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            acc += (std::polar(1.0, k * h * (i - j)) * Kxy[size_t(i) * M + j] * Kxy[size_t(j) * M + i]).real();
    return finite(p, k, p.N - h * h * acc, "kernel-oracle", 1e-12 * p.N);
}

SweepTable drp_curve(int N, double t, const std::vector<double>& mu_grid) {
    if (N < 2) throw DomainError("drp_curve: N must be >= 2");
    SweepTable tab({"mu", "k", "sff_term", "moment_term", "value", "method", "err_estimate"});
    for (double mu : mu_grid) {
        if (!(mu > 0.0)) throw DomainError("drp_curve: mu grid must be positive");
        SffValue s = sff_scaled_limit(mu, t);
        const double m = moment_jacobi(N, mu * N, t);
        const double a = N * s.value, b = double(N) * N * m * m;
        tab.add_row({mu, mu * N, a, b, a + b, std::string(s.method) + "+jacobi", N * s.err_estimate});
    }
    return tab;
}

DipFeatures dip_features(const SweepTable& drp) {
    const auto v = drp.column("value");
    const auto a = drp.column("sff_term");
    const auto mu = drp.column("mu");
    if (v.size() < 3) throw DomainError("dip_features: need at least three rows");
    size_t i0 = v.size() - 1;
    for (size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] < v[i - 1] && v[i] <= v[i + 1]) {
            i0 = i;
            break;
        }
    DipFeatures d;
    d.mu_dip = mu[i0];
    d.min_value = v[i0];
    for (size_t i = i0 + 1; i < v.size(); ++i)
        if (a[i] > 0.0) d.post_dip_height = std::max(d.post_dip_height, std::log10(v[i] / a[i]));
    return d;
}

}  // namespace ubmot
