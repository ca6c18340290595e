#pragma once

#include <complex>
#include <vector>

#include "ubmot/errors.hpp"

namespace ubmot {

using cplx = std::complex<double>;

struct EnsembleParams {
    int N = 1;
    double t = 0.0;
    double q = 1.0;  // exp(−t/(2N))

    static EnsembleParams make(int N, double t);
    double center() const { return 0.5 * (N - 1); }
    double log_q() const { return -t / (2.0 * N); }
};

class WindowTooSmall : public DomainError {
public:
    using DomainError::DomainError;
};

// Sw(s) = q^{(s − (N−1)/2)²}
double spherical_weight(const EnsembleParams& p, long s);
double spherical_weight_q(double q, int N, long s);

cplx biorth_P(const EnsembleParams& p, int j, cplx z);
// Truncated to l ∈ [−l_window, N−1+l_window]; throws WindowTooSmall when the
// geometric bound on the discarded tail exceeds tail_tol relative to the
// largest retained term.
cplx biorth_Q(const EnsembleParams& p, int j, cplx z, int l_window, double tail_tol = 1e-15);

// Smallest window whose boundary shell is below 1e−17 of the largest kept
// coefficient, plus one extra shell.  t must be positive.
int kernel_window(const EnsembleParams& p);

// K_N(x, y) with all coefficients precomputed (immutable after construction).
class CorrelationKernel {
public:
    explicit CorrelationKernel(const EnsembleParams& p);

    cplx operator()(double x, double y) const;
    int l_window() const { return L_; }
    const EnsembleParams& params() const { return p_; }

    // Fourier coefficients D_m of 2π ρ(x) − N, i.e. ρ = (N + Σ D_m e^{imx})/2π;
    // index m + max_frequency().
    const std::vector<cplx>& density_coefficients() const { return D_; }
    int max_frequency() const { return N_ - 1 + L_; }
    double density(double x) const;

private:
    EnsembleParams p_;
    int N_, L_;
    std::vector<long> ls_;           // retained l values
    std::vector<double> coeff_;      // a_k b_l/(k−l), row-major [k][li]
    std::vector<cplx> D_;
};

cplx kernel(const EnsembleParams& p, double x, double y);
double density_finite_N(const EnsembleParams& p, double x);

// Joint eigen-angle density for N ≤ 3, normalized over [−π, π]^N.
double pdf_identity_start(const EnsembleParams& p, const std::vector<double>& x);

}  // namespace ubmot
