#include "ubmot/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ubmot {

namespace {

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

bool is_integer(double x) { return x == std::floor(x); }

SignedLog lgamma_signed(double x) {
    int s = 1;
    double l = ::lgamma_r(x, &s);
    return {l, s};
}

constexpr double kBig = 0x1p+300;
constexpr double kSmall = 0x1p-300;

// Two consecutive members of a recurrence sharing one binary exponent.
struct ScaledPair {
    double prev, cur;
    long e = 0;

    void rescale() {
        double m = std::max(std::abs(prev), std::abs(cur));
        if (m == 0.0 || (m < kBig && m > kSmall)) return;
        int ex;
        std::frexp(m, &ex);
        prev = std::ldexp(prev, -ex);
        cur = std::ldexp(cur, -ex);
        e += ex;
    }
    Scaled value() const { return Scaled(cur, e); }
};

// Γ(n+p+1)/(Γ(p+1) n!)
SignedLog log_binom(int n, double p) {
    SignedLog r = log_gamma_ratio(n + p + 1.0, p + 1.0);
    if (r.sign == 0) return r;
    r.log_abs -= std::lgamma(n + 1.0);
    return r;
}

Scaled jacobi_degree(int n, double a, double b, double x) {
    if (n == 0) return Scaled(1.0);
    ScaledPair p{1.0, 0.5 * ((a + b + 2.0) * x + (a - b))};
    for (int k = 2; k <= n; ++k) {
        double s = 2.0 * k + a + b;
        double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        double next = (c2 * p.cur - c3 * p.prev) / c1;
        p.prev = p.cur;
        p.cur = next;
        p.rescale();
    }
    return p.value();
}

// P_n^{(a,b)}(x) = C(n+b,n) ((x−1)/2)^n ₂F₁(−n, −n−a; b+1; (x+1)/(x−1)),
// with the ₂F₁ run through its contiguous recurrence in the first parameter.
Scaled jacobi_contiguous(int n, double a, double b, double x) {
    if (x == 1.0) {
        SignedLog r = log_binom(n, a);
        return Scaled::from_log(r.log_abs, r.sign);
    }
    const double z = (x + 1.0) / (x - 1.0);
    const double bb = -n - a;
    const double c = b + 1.0;
    ScaledPair f{1.0, 1.0};
    if (n >= 1) {
        if (c == 0.0) throw DomainError("jacobi: degenerate contiguous recurrence");
        f.cur = 1.0 - bb * z / c;
    }
    for (int m = 1; m < n; ++m) {
        if (c + m == 0.0) throw DomainError("jacobi: degenerate contiguous recurrence");
        double next = ((2.0 * m + c - (bb + m) * z) * f.cur + m * (z - 1.0) * f.prev) / (c + m);
        f.prev = f.cur;
        f.cur = next;
        f.rescale();
    }
    SignedLog pre = log_binom(n, b);
    if (pre.sign == 0) return Scaled(0.0);
    double half = 0.5 * (x - 1.0);
    pre.log_abs += n * std::log(std::abs(half));
    if (half < 0 && (n % 2)) pre.sign = -pre.sign;
    return f.value() * Scaled::from_log(pre.log_abs, pre.sign);
}

Scaled jacobi_dispatch(int n, double a, double b, double x) {
    if (n < 0) throw DomainError("jacobi: negative degree");
    if (n == 0) return Scaled(1.0);
    if (a > -1.0 && b > -1.0) return jacobi_degree(n, a, b, x);
    if (is_integer(a) && a <= -1.0 && a >= -n) {
        // P_n^{(−l,b)}(x) = (n+b−l+1)_l/(n−l+1)_l ((x−1)/2)^l P_{n−l}^{(l,b)}(x)
        const int l = static_cast<int>(-a);
        Scaled f(1.0);
        for (int i = 0; i < l; ++i) f *= (n + b - l + 1.0 + i) / (n - l + 1.0 + i);
        f *= Scaled::from_log(l * std::log(std::abs(0.5 * (x - 1.0))),
                              (x < 1.0 && (l % 2)) ? -1 : (x == 1.0 ? 0 : 1));
        return f * jacobi_dispatch(n - l, l, b, x);
    }
    if (b <= -1.0 && (a > -1.0 || (is_integer(b) && b >= -n))) {
        Scaled r = jacobi_dispatch(n, b, a, -x);
        return (n % 2) ? r * -1.0 : r;
    }
    return jacobi_contiguous(n, a, b, x);
}

}  // namespace

SignedLog log_gamma_ratio(double a, double b) {
    const bool pa = is_pole(a), pb = is_pole(b);
    if (pa && pb) {
        // Residues (−1)^n/n! at −n.
        const double n = -a, m = -b;
        SignedLog r{std::lgamma(m + 1.0) - std::lgamma(n + 1.0), 1};
        if (std::fmod(std::abs(n - m), 2.0) == 1.0) r.sign = -1;
        return r;
    }
    if (pa) throw DomainError("log_gamma_ratio: infinite ratio");
    if (pb) return {-std::numeric_limits<double>::infinity(), 0};
    SignedLog ga = lgamma_signed(a), gb = lgamma_signed(b);
    return {ga.log_abs - gb.log_abs, ga.sign * gb.sign};
}

Scaled Scaled::from_log(double log_abs, int sign) {
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return Scaled(0.0);
    const double e = std::floor(log_abs / std::numbers::ln2);
    return Scaled(sign * std::exp(log_abs - e * std::numbers::ln2), static_cast<long>(e));
}

double Scaled::log_abs() const {
    if (m_ == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(m_)) + e_ * std::numbers::ln2;
}

Scaled& Scaled::operator*=(const Scaled& o) {
    m_ *= o.m_;
    e_ += o.e_;
    normalize();
    return *this;
}

void Scaled::normalize() {
    if (m_ == 0.0 || !std::isfinite(m_)) {
        if (m_ == 0.0) e_ = 0;
        return;
    }
    int ex;
    m_ = std::frexp(m_, &ex);
    e_ += ex;
}

SeriesValue hyp2f1_terminating(double a, double b, double c, double z) {
    if (a > 0 || a != std::floor(a))
        throw DomainError("hyp2f1_terminating: a must be a nonpositive integer");
    const int m = static_cast<int>(-a);
    double term = 1.0, sum = 1.0, comp = 0.0, abs_sum = 1.0;
    int n = 0;
    for (; n < m; ++n) {
        if (b + n == 0.0) break;
        if (c + n == 0.0)
            throw DomainError("hyp2f1_terminating: c hits a nonpositive integer before termination");
        term *= (a + n) * (b + n) / ((n + 1.0) * (c + n)) * z;
        double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        abs_sum += std::abs(term);
    }
    double v = sum + comp;
    return {v, v == 0.0 ? std::numeric_limits<double>::infinity() : abs_sum / std::abs(v), n + 1};
}

Scaled laguerre_scaled(int n, double alpha, double x) {
    if (n < 0) throw DomainError("laguerre: negative degree");
    if (n == 0) return Scaled(1.0);
    ScaledPair p{1.0, 1.0 + alpha - x};
    for (int k = 1; k < n; ++k) {
        double next = ((2.0 * k + 1.0 + alpha - x) * p.cur - (k + alpha) * p.prev) / (k + 1.0);
        p.prev = p.cur;
        p.cur = next;
        p.rescale();
    }
    return p.value();
}

double laguerre(int n, double alpha, double x) { return laguerre_scaled(n, alpha, x).to_double(); }

Scaled jacobi_scaled(int n, double a, double b, double x) { return jacobi_dispatch(n, a, b, x); }

double jacobi(int n, double a, double b, double x) { return jacobi_dispatch(n, a, b, x).to_double(); }

double theta(int kind, double z, double q, int deriv_order, double tail_tol) {
    if (kind != 2 && kind != 3) throw DomainError("theta: kind must be 2 or 3");
    if (!(q >= 0.0 && q < 1.0)) throw DomainError("theta: need 0 <= q < 1");
    if (deriv_order < 0) throw DomainError("theta: negative derivative order");
    if (q == 0.0) return (kind == 3 && deriv_order == 0) ? 1.0 : 0.0;

    const double lq = std::log(q);
    const int n_min = static_cast<int>(std::ceil(std::sqrt(std::log(tail_tol) / lq))) + 2;
    // cos(θ + rπ/2) without rounding π/2
    auto shifted_cos = [r = deriv_order % 4](double th) {
        switch (r) {
            case 0: return std::cos(th);
            case 1: return -std::sin(th);
            case 2: return -std::cos(th);
            default: return std::sin(th);
        }
    };
    double sum = (kind == 3 && deriv_order == 0) ? 1.0 : 0.0;
    double biggest = std::abs(sum);
    for (int n = 1;; ++n) {
        const double freq = kind == 3 ? 2.0 * n : 2.0 * n - 1.0;
        const double expo = kind == 3 ? double(n) * n : (n - 0.5) * (n - 0.5);
        const double mag = 2.0 * std::exp(expo * lq) * std::pow(freq, deriv_order);
        sum += mag * shifted_cos(freq * z);
        biggest = std::max(biggest, mag);
        if (n >= n_min && mag < tail_tol * biggest) break;
    }
    return sum;
}

double gamma_rate(double x) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("gamma_rate: x must lie in (0, 1]");
    const double s = std::sqrt(1.0 - x);
    return s - x * std::atanh(s);
}

double decay_rate_c(double t) {
    if (!(t >= 4.0)) throw DomainError("decay_rate_c: t must be >= 4");
    return t * gamma_rate(4.0 / t);
}

}  // namespace ubmot
