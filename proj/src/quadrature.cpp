#include "ubmot/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <numbers>

#include "ubmot/errors.hpp"

namespace ubmot {

namespace {

GaussRule make_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // refresh derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = w;
    }
    if (n % 2) r.x[n / 2] = 0.0;
    return r;
}

double apply(const GaussRule& r, const std::function<double(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(m + h * r.x[i]);
    return h * s;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: order must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(make_rule(n));
    return *slot;
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b, int n) {
    return apply(gauss_legendre(n), f, a, b);
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol, int n, int max_depth) {
    const GaussRule& r = gauss_legendre(n);
    struct Panel {
        double lo, hi, value, error;
        int depth;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    auto make = [&](double lo, double hi, int depth) {
        const double mid = 0.5 * (lo + hi);
        const double whole = apply(r, f, lo, hi);
        const double halves = apply(r, f, lo, mid) + apply(r, f, mid, hi);
        return Panel{lo, hi, halves, std::abs(halves - whole), depth};
    };
    // Global bisection: always split the panel with the largest error, so an
    // endpoint singularity only costs panels where it actually lives.
    std::priority_queue<Panel> heap;
    const int m = 8;
    double err = 0.0, mag = 0.0;
    for (int i = 0; i < m; ++i) {
        Panel p = make(a + (b - a) * i / m, a + (b - a) * (i + 1) / m, 0);
        err += p.error;
        mag += std::abs(p.value);
        heap.push(p);
    }
    const double target = std::max(abs_tol, rel_tol * mag);
    while (err > target) {
        Panel p = heap.top();
        if (p.depth >= max_depth || p.hi - p.lo < 1e-15 * std::max(1.0, std::abs(p.lo))) {
            throw ConvergenceError("integrate_adaptive: maximum depth reached", err);
        }
        heap.pop();
        const double mid = 0.5 * (p.lo + p.hi);
        Panel left = make(p.lo, mid, p.depth + 1), right = make(mid, p.hi, p.depth + 1);
        err += left.error + right.error - p.error;
        heap.push(left);
        heap.push(right);
    }
    QuadResult out;
    out.panels = static_cast<int>(heap.size());
    while (!heap.empty()) {
        out.value += heap.top().value;
        out.error += heap.top().error;
        heap.pop();
    }
    return out;
}

QuadResult integrate_doubling(const std::function<double(double)>& f, double a, double b,
                              double tol, int n0, int n_max) {
    double prev = integrate_fixed(f, a, b, n0);
    for (int n = 2 * n0; n <= n_max; n *= 2) {
        double cur = integrate_fixed(f, a, b, n);
        double err = std::abs(cur - prev);
        if (err <= tol * std::max(1.0, std::abs(cur))) return {cur, err, n};
        prev = cur;
    }
    throw ConvergenceError("integrate_doubling: order limit reached", std::abs(prev));
}

}  // namespace ubmot
