#include "ubmot/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ubmot/specfun.hpp"

namespace ubmot {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log_abs_a(const EnsembleParams& p, int k) {
    const double d = k - p.center();
    return -d * d * p.log_q() - std::lgamma(p.N - k) - std::lgamma(k + 1.0);
}

SignedLog log_b(const EnsembleParams& p, long l) {
    SignedLog r = log_gamma_ratio(double(p.N - l), double(-l));
    const double d = l - p.center();
    r.log_abs += d * d * p.log_q();
    return r;
}

}  // namespace

EnsembleParams EnsembleParams::make(int N, double t) {
    if (N < 1) throw DomainError("EnsembleParams: N must be >= 1");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("EnsembleParams: t must be finite and >= 0");
    return {N, t, std::exp(-t / (2.0 * N))};
}

double spherical_weight(const EnsembleParams& p, long s) {
    const double d = s - p.center();
    return std::exp(d * d * p.log_q());
}

double spherical_weight_q(double q, int N, long s) {
    const double d = s - 0.5 * (N - 1);
    return std::pow(q, d * d);
}

cplx biorth_P(const EnsembleParams& p, int j, cplx z) {
    if (j < 0 || j >= p.N) throw DomainError("biorth_P: j out of range");
    cplx sum = 0.0, zk = 1.0;
    for (int k = 0; k <= j; ++k) {
        const double c = std::exp(-std::lgamma(j - k + 1.0) - std::lgamma(k + 1.0)) /
                         spherical_weight(p, k);
        sum += c * zk;
        zk *= -z;
    }
    return sum;
}

cplx biorth_Q(const EnsembleParams& p, int j, cplx z, int l_window, double tail_tol) {
    if (j < 0 || j >= p.N) throw DomainError("biorth_Q: j out of range");
    if (l_window < 1) throw DomainError("biorth_Q: l_window must be positive");
    auto term_log = [&](long l) {
        SignedLog r = log_gamma_ratio(double(j - l), double(-l));
        const double d = l - p.center();
        r.log_abs += d * d * p.log_q();
        return r;
    };
    const long lo = -l_window, hi = p.N - 1 + l_window;
    cplx sum = 0.0;
    double biggest = -std::numeric_limits<double>::infinity();
    for (long l = lo; l <= hi; ++l) {
        if (l >= 0 && l < j) continue;
        SignedLog c = term_log(l);
        if (c.sign == 0) continue;
        biggest = std::max(biggest, c.log_abs);
        sum += c.value() * std::pow(z, -double(l));
    }
    // Tail beyond each end: first dropped term over (1 − ratio).
    auto tail = [&](long first, long step) {
        SignedLog t0 = term_log(first), t1 = term_log(first + step);
        if (t0.sign == 0) return -std::numeric_limits<double>::infinity();
        const double r = std::exp(t1.log_abs - t0.log_abs);
        if (!(r < 1.0)) return std::numeric_limits<double>::infinity();
        return t0.log_abs - std::log1p(-r);
    };
    const double worst = std::max(tail(lo - 1, -1), tail(hi + 1, +1));
    if (worst > biggest + std::log(tail_tol))
        throw WindowTooSmall("biorth_Q: truncated tail exceeds tolerance; enlarge l_window");
    return sum;
}

int kernel_window(const EnsembleParams& p) {
    if (!(p.t > 0.0)) throw DomainError("kernel_window: requires t > 0");
    const double drop = std::log(1e-17);
    double biggest = -std::numeric_limits<double>::infinity();
    for (long s = 1; s < 2000000; ++s) {
        const double lo = log_b(p, -s).log_abs, hi = log_b(p, p.N - 1 + s).log_abs;
        const double shell = std::max(lo, hi);
        biggest = std::max(biggest, shell);
        if (shell < biggest + drop) return static_cast<int>(s + 1);
    }
    throw DomainError("kernel_window: t too small for a finite window");
}

CorrelationKernel::CorrelationKernel(const EnsembleParams& p)
    : p_(p), N_(p.N), L_(kernel_window(p)) {
    for (long l = -L_; l <= N_ - 1 + L_; ++l)
        if (l < 0 || l >= N_) ls_.push_back(l);
    const int M = max_frequency();
    D_.assign(2 * M + 1, 0.0);
    coeff_.resize(size_t(N_) * ls_.size());
    for (int k = 0; k < N_; ++k) {
        const double la = log_abs_a(p_, k);
        const int sa = (k % 2) ? -1 : 1;
        for (size_t i = 0; i < ls_.size(); ++i) {
            const long l = ls_[i];
            SignedLog b = log_b(p_, l);
            const double c = b.sign == 0 ? 0.0 : sa * b.sign * std::exp(la + b.log_abs) / double(k - l);
            coeff_[k * ls_.size() + i] = c;
            D_[(k - l) + M] += c;
        }
    }
}

cplx CorrelationKernel::operator()(double x, double y) const {
    cplx geo = 0.0;
    for (int k = 0; k < N_; ++k) geo += std::polar(1.0, k * (x - y));
    std::vector<cplx> ey(ls_.size());
    for (size_t i = 0; i < ls_.size(); ++i) ey[i] = std::polar(1.0, -double(ls_[i]) * y);
    cplx rest = 0.0;
    for (int k = 0; k < N_; ++k) {
        cplx row = 0.0;
        const double* c = &coeff_[k * ls_.size()];
        for (size_t i = 0; i < ls_.size(); ++i) row += c[i] * ey[i];
        rest += std::polar(1.0, k * x) * row;
    }
    return (geo + rest) / kTwoPi;
}

double CorrelationKernel::density(double x) const {
    const int M = max_frequency();
    double s = N_;
    for (int m = -M; m <= M; ++m) {
        const cplx d = D_[m + M];
        if (d != 0.0) s += (d * std::polar(1.0, m * x)).real();
    }
    return s / kTwoPi;
}

cplx kernel(const EnsembleParams& p, double x, double y) { return CorrelationKernel(p)(x, y); }

double density_finite_N(const EnsembleParams& p, double x) { return CorrelationKernel(p).density(x); }

double pdf_identity_start(const EnsembleParams& p, const std::vector<double>& x) {
    const int N = p.N;
    if (N > 3) throw DomainError("pdf_identity_start: oracle limited to N <= 3");
    if (static_cast<int>(x.size()) != N) throw DomainError("pdf_identity_start: need N angles");
    const int kind = (N % 2) ? 3 : 2;
    double fact = 1.0;
    for (int l = 1; l <= N; ++l) fact *= std::tgamma(l + 1.0);
    // q^{−N(N²−1)/12}: with a positive exponent the integral comes out q^{N(N²−1)/6}
    const double pref = std::pow(p.q, -N * (N * N - 1) / 12.0) / (std::pow(kTwoPi, N) * fact);
    double vdm = 1.0;
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k) vdm *= std::sin(0.5 * (x[k] - x[j]));
    // (−2∂_x)^r θ(x/2) = (−1)^r θ^{(r)}(x/2)
    double m[3][3] = {};
    for (int j = 0; j < N; ++j)
        for (int r = 0; r < N; ++r)
            m[j][r] = ((r % 2) ? -1.0 : 1.0) * theta(kind, 0.5 * x[j], p.q, r);
    double det = 0.0;
    if (N == 1) det = m[0][0];
    else if (N == 2) det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    else
        det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
              m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
              m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return pref * vdm * det;
}

}  // namespace ubmot
