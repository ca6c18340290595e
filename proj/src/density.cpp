#include "ubmot/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ubmot/errors.hpp"
#include "ubmot/moments.hpp"
#include "ubmot/specfun.hpp"

namespace ubmot {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// (H−1) − w(H+1)e^{−tH/2} = 0 is the functional equation with the
// exponential moved to the side where it cannot overflow for Re H ≥ 0.
struct Newton {
    cplx H;
    bool ok;
    double residual;
};

Newton newton(cplx H, double t, cplx w, int max_it = 80) {
    for (int i = 0; i < max_it; ++i) {
        const cplx e = std::exp(-0.5 * t * H);
        const cplx f = (H - 1.0) - w * (H + 1.0) * e;
        const cplx fp = 1.0 - w * e * (1.0 - 0.5 * t * (H + 1.0));
        const cplx d = f / fp;
        H -= d;
        if (!std::isfinite(H.real()) || !std::isfinite(H.imag())) return {H, false, INFINITY};
        if (std::abs(d) <= 1e-14 * std::max(1.0, std::abs(H))) {
            const cplx r = (H - 1.0) - w * (H + 1.0) * std::exp(-0.5 * t * H);
            return {H, true, std::abs(r)};
        }
    }
    return {H, false, std::abs((H - 1.0) - w * (H + 1.0) * std::exp(-0.5 * t * H))};
}

// Residual of ((H−1)/(H+1))e^{tH/2} = w after multiplying through by
// e^{−tH/2}, which keeps it meaningful once H rounds to 1 at large t.
double residual(cplx H, double t, cplx w) {
    return std::abs((H - 1.0) / (H + 1.0) - w * std::exp(-0.5 * t * H));
}

// μ solving (4/μ) atanh(μ) = t on (0, 1); t > 4.
double solve_mu_r(double t) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        if (m == lo || m == hi) break;
        (4.0 / m * std::atanh(m) < t ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

// Value at x = π.  For t > 4 the real root is followed down from large t
// where it is ≈ 1; for t ≤ 4 the root there is exactly 0.
cplx start_at_pi(double t) {
    if (t <= 4.0) return 0.0;
    double tc = std::max(64.0, 2.0 * t);
    cplx H = 1.0;
    while (true) {
        Newton r = newton(H, tc, -1.0);
        if (!r.ok) throw ConvergenceError("herglotz_solve: t-continuation failed", r.residual);
        H = cplx(std::abs(r.H.real()), 0.0);
        if (tc == t) return H;
        tc = std::max(t, 0.9 * tc);
    }
}

cplx clamp_branch(cplx H) {
    if (H.real() < 0.0) H = -std::conj(H);  // roots pair as H ↔ −H̄ on |w| = 1
    if (std::abs(H.real()) < 1e-8) H.real(0.0);
    return H;
}

}  // namespace

std::vector<cplx> herglotz_solve(double t, const std::vector<double>& xs) {
    if (!(t > 0.0)) throw DomainError("herglotz_solve: t must be positive");
    std::vector<size_t> order(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(std::abs(xs[i]) <= kPi + 1e-12)) throw DomainError("herglotz_solve: x outside [-pi, pi]");
        order[i] = i;
    }
    // H(e^{−ix}) = conj H(e^{ix}); sweep |x| from π down.
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return std::abs(xs[a]) > std::abs(xs[b]); });
    std::vector<cplx> out(xs.size());
    cplx H = start_at_pi(t);
    double x = kPi;
    const double max_step = 0.01;
    for (size_t idx : order) {
        const double target = std::min(kPi, std::abs(xs[idx]));
        while (x > target) {
            double h = std::min(max_step, x - target);
            while (true) {
                const double xn = (h >= x - target) ? target : x - h;
                Newton r = newton(H, t, std::polar(1.0, xn));
                if (r.ok) {
                    cplx Hn = clamp_branch(r.H);
                    if (std::abs(Hn - H) < 0.25 * std::max(1.0, std::abs(H))) {
                        H = Hn;
                        x = xn;
                        break;
                    }
                }
                h *= 0.5;
                if (h < 1e-14) throw ConvergenceError("herglotz_solve: continuation stalled", r.residual);
            }
        }
        const double res = residual(H, t, std::polar(1.0, target));
        if (!(res < 1e-12 * std::max(1.0, std::abs(H))))
            throw ConvergenceError("herglotz_solve: residual above 1e-12", res);
        out[idx] = xs[idx] < 0 ? std::conj(H) : H;
    }
    return out;
}

cplx herglotz_solve(double t, double x) { return herglotz_solve(t, std::vector<double>{x})[0]; }

cplx herglotz_interior(double t, cplx w) {
    if (!(t > 0.0)) throw DomainError("herglotz_interior: t must be positive");
    const double r = std::abs(w);
    if (!(r < 1.0)) throw DomainError("herglotz_interior: need |w| < 1");
    // seed from H = 1 + 2 Σ m_p w^p
    cplx seed = 1.0, wp = 1.0;
    const int P = r == 0.0 ? 0 : static_cast<int>(std::ceil(std::log(1e-16) / std::log(r)));
    for (int p = 1; p <= P; ++p) {
        wp *= w;
        seed += 2.0 * moment_limit(p, t).value * wp;
    }
    Newton n = newton(seed, t, w);
    if (!n.ok) throw ConvergenceError("herglotz_interior: Newton did not converge", n.residual);
    return n.H;
}

int fourier_terms(double t, double tol) {
    if (!(t > 4.0)) throw DomainError("fourier_terms: requires t > 4");
    return static_cast<int>(std::ceil(2.0 * std::log(1.0 / tol) / decay_rate_c(t)));
}

double density_limit(double t, double x, DensityMethod method) {
    if (method == DensityMethod::HERGLOTZ) return herglotz_solve(t, x).real();
    if (!(t > 4.0)) throw DomainError("density_limit: FOURIER method requires t > 4");
    const int K = fourier_terms(t);
    double s = 1.0;
    for (int k = 1; k <= K; ++k) s += 2.0 * moment_limit(k, t).value * std::cos(k * x);
    return s;
}

DensityProfile density_profile(double t, const std::vector<double>& grid, DensityMethod method) {
    DensityProfile out;
    out.t = t;
    out.grid = grid;
    out.values.resize(grid.size());
    if (method == DensityMethod::HERGLOTZ) {
        auto H = herglotz_solve(t, grid);
        for (size_t i = 0; i < grid.size(); ++i) out.values[i] = H[i].real();
    } else {
        for (size_t i = 0; i < grid.size(); ++i) out.values[i] = density_limit(t, grid[i], method);
    }
    if (t < 4.0) {
        out.support_edge = support_edge(t);
        out.edge_amplitude = edge_amplitude(t);
    } else {
        out.support_edge = kPi;
    }
    return out;
}

double support_edge(double t) {
    if (!(t > 0.0 && t < 4.0)) throw DomainError("support_edge: requires 0 < t < 4");
    return 0.5 * std::sqrt(t * (4.0 - t)) + std::acos(1.0 - 0.5 * t);
}

double edge_amplitude(double t) {
    if (!(t > 0.0 && t < 4.0)) throw DomainError("edge_amplitude: requires 0 < t < 4");
    return std::sqrt(2.0 / (std::pow(t, 1.5) * std::sqrt(4.0 - t))) / kPi;
}

CriticalMus critical_mus(double t) {
    if (!(t > 0.0)) throw DomainError("critical_mus: t must be positive");
    CriticalMus out;
    if (t > 4.0) out.mu_r = solve_mu_r(t);
    // (4/μ) atanh(1/μ) = t on (1, ∞), decreasing in μ
    auto g = [](double m) { return 4.0 / m * std::atanh(1.0 / m); };
    double lo = 1.0, hi = 2.0;
    while (g(hi) > t) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        if (m == lo || m == hi) break;
        (g(m) > t ? lo : hi) = m;
    }
    out.mu_p = 0.5 * (lo + hi);
    return out;
}

DipWavenumber dip_wavenumber(double t, int N) {
    if (!(t > 0.0)) throw DomainError("dip_wavenumber: t must be positive");
    if (N < 2) throw DomainError("dip_wavenumber: N must be >= 2");
    if (t < 4.0) return {std::sqrt(edge_amplitude(t) * N), 0.5, "sqrt(A(t) N)"};
    if (t > 4.0) return {std::log(double(N)) / decay_rate_c(t), 0.0, "log(N)/c(t)"};
    return {std::numeric_limits<double>::quiet_NaN(), 6.0 / 11.0, "N^(6/11)"};
}

}  // namespace ubmot
