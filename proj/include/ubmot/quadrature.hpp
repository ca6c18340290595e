#pragma once

#include <functional>
#include <vector>

namespace ubmot {

struct GaussRule {
    std::vector<double> x, w;  // on [−1, 1]
};

// Cached per order; safe to call from several threads.
const GaussRule& gauss_legendre(int n);

double integrate_fixed(const std::function<double(double)>& f, double a, double b, int n);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

// Globally adaptive bisection; each panel compares one order-n rule against
// two on the halves and the worst panel is split next.  The target is
// max(abs_tol, rel_tol·∫|f|) with ∫|f| from eight starting panels.  Throws
// ConvergenceError when the worst panel is already max_depth deep.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol = 0.0, int n = 20,
                              int max_depth = 40);

// Fixed-order rule with the order doubled until two successive values agree.
QuadResult integrate_doubling(const std::function<double(double)>& f, double a, double b,
                              double tol, int n0 = 32, int n_max = 2048);

}  // namespace ubmot
