#pragma once

#include <cmath>
#include <vector>

#include "ubmot/errors.hpp"

namespace ubmot {

// sign * exp(log_abs); sign == 0 encodes an exact zero.
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

// Γ(a)/Γ(b) in log form.  Both arguments may sit on poles: the ratio of two
// poles is taken as the limit along a common offset, so
// Γ(j−l)/Γ(−l) = (−1)^j Γ(l+1)/Γ(l−j+1) for integers l ≥ j.
SignedLog log_gamma_ratio(double a, double b);

// Mantissa/exponent pair for recurrences that leave the double range.
class Scaled {
public:
    Scaled() = default;
    Scaled(double m, long e = 0) : m_(m), e_(e) { normalize(); }

    static Scaled from_log(double log_abs, int sign);

    double mantissa() const { return m_; }
    long exponent() const { return e_; }
    int sign() const { return (m_ > 0) - (m_ < 0); }
    double log_abs() const;
    double to_double() const { return std::ldexp(m_, static_cast<int>(clamp_exp(e_))); }

    Scaled& operator*=(const Scaled& o);
    Scaled& operator*=(double s) { return *this *= Scaled(s); }
    friend Scaled operator*(Scaled a, const Scaled& b) { return a *= b; }
    friend Scaled operator*(Scaled a, double b) { return a *= b; }

private:
    void normalize();
    static long clamp_exp(long e) { return e < -2000 ? -2000 : (e > 2000 ? 2000 : e); }

    double m_ = 0.0;
    long e_ = 0;
};

struct SeriesValue {
    double value = 0.0;
    double condition = 1.0;  // Σ|term| / |Σ term|
    int terms = 0;
};

// Terminating ₂F₁(a,b;c;z), a = −m.  Terms come from the Pochhammer ratio
// recurrence and are accumulated with Neumaier summation.
SeriesValue hyp2f1_terminating(double a, double b, double c, double z);

// Same sum in a caller-chosen floating type (used with Ext for the
// cancellation-prone monomial forms).  The series stops early if b hits a
// nonpositive integer.
template <class Real>
struct SeriesT {
    Real value;
    Real abs_sum;
    int terms;
};

template <class Real>
SeriesT<Real> hyp2f1_terminating_t(int m, const Real& b, const Real& c, const Real& z) {
    using std::abs;
    Real term = 1, sum = 1, abs_sum = 1;
    int n = 0;
    for (; n < m; ++n) {
        Real bn = b + n;
        if (bn == 0) break;
        Real cn = c + n;
        if (cn == 0)
            throw DomainError("hyp2f1_terminating: c hits a nonpositive integer before termination");
        term *= Real(n - m) * bn / (Real(n + 1) * cn) * z;
        sum += term;
        abs_sum += abs(term);
    }
    return {sum, abs_sum, n + 1};
}

double laguerre(int n, double alpha, double x);
Scaled laguerre_scaled(int n, double alpha, double x);

// P_n^{(a,b)}(x) for arbitrary real a, b.  Classical parameters use the degree
// recurrence; a negative integer a in [−n, −1] is reduced to a classical
// polynomial of lower degree; other nonclassical a go through the contiguous
// recurrence of the equivalent terminating ₂F₁.
double jacobi(int n, double a, double b, double x);
Scaled jacobi_scaled(int n, double a, double b, double x);

// d^r/dz^r θ_κ(z; q), κ ∈ {2, 3}.
double theta(int kind, double z, double q, int deriv_order = 0, double tail_tol = 1e-16);

double gamma_rate(double x);
// c(t) = t γ(4/t), t ≥ 4.
double decay_rate_c(double t);

}  // namespace ubmot
