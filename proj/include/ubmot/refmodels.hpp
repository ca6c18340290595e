#pragma once

#include <vector>

#include "ubmot/table.hpp"

namespace ubmot {

// k = 2√(2N) τ_b
double gue_wavenumber(int N, double tau_b);

// ⟨Σ e^{ikλ_j}⟩ over the GUE: e^{−k²/4} L_{N−1}^{(1)}(k²/2).
double gue_char_avg(int N, double k);

// Large-N envelope (2√(2πN) τ_b^{3/2})^{−1} of gue_char_avg at k = 2√(2N)τ_b.
double gue_char_envelope(int N, double tau_b);

double gue_sff_limit(double tau_b);
double lue_sff_limit(double k);

// Columns tau_b, k, sff_term, moment_term, value, method, err_estimate.
SweepTable gue_drp_curve(int N, const std::vector<double>& tau_grid);

// x at the smallest local maximum of y: the bottom of the upper envelope,
// which locates the dip without landing on a zero of the oscillating term.
double envelope_dip(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ubmot
