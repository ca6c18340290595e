#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace ubmot {

// H_t(e^{ix}) on the branch with Re H ≥ 0, x ∈ [−π, π].
std::complex<double> herglotz_solve(double t, double x);
// Same solve for a batch of angles; one continuation sweep serves all of them.
std::vector<std::complex<double>> herglotz_solve(double t, const std::vector<double>& xs);
// H_t(w) for |w| < 1.
std::complex<double> herglotz_interior(double t, std::complex<double> w);

enum class DensityMethod { HERGLOTZ, FOURIER };

double density_limit(double t, double x, DensityMethod method = DensityMethod::HERGLOTZ);

struct DensityProfile {
    double t = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
    double support_edge = 0.0;
    std::optional<double> edge_amplitude;
};

DensityProfile density_profile(double t, const std::vector<double>& grid,
                               DensityMethod method = DensityMethod::HERGLOTZ);

// Number of cosine terms kept by the Fourier method (t > 4).
int fourier_terms(double t, double tol = 1e-16);

double support_edge(double t);
double edge_amplitude(double t);

struct CriticalMus {
    std::optional<double> mu_r;  // t > 4 only
    double mu_p = 0.0;
};

CriticalMus critical_mus(double t);

struct DipWavenumber {
    double value = 0.0;  // NaN at t = 4, where only the scaling is known
    double exponent = 0.0;
    std::string law;
};

DipWavenumber dip_wavenumber(double t, int N);

}  // namespace ubmot
