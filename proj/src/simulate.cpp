#include "ubmot/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ubmot/errors.hpp"

namespace ubmot {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

double cyc(double a, double b) {
    double d = std::remainder(a - b, 2.0 * kPi);
    return std::abs(d);
}

double wrap(double x) {
    double y = std::remainder(x, 2.0 * kPi);
    return y <= -kPi ? y + 2.0 * kPi : y;
}

void reunitarize(Eigen::MatrixXcd& U) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(U, Eigen::ComputeFullU | Eigen::ComputeFullV);
    U = svd.matrixU() * svd.matrixV().adjoint();
    const double drift = (U.adjoint() * U - Eigen::MatrixXcd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
    if (drift > 1e-8) throw StabilityError("evolve: unitarity drift above 1e-8 after correction");
}

std::vector<double> eigen_angles(const Eigen::MatrixXcd& U) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(U, false);
    std::vector<double> a(U.rows());
    for (Eigen::Index i = 0; i < U.rows(); ++i) a[i] = wrap(std::arg(es.eigenvalues()[i]));
    return a;
}

// Runs one trajectory and calls visit(step, U) at step 0 and after every step
// for which want(step) is true.
template <class Want, class Visit>
void run(const SimConfig& c, long id, long last_step, Want want, Visit visit) {
    Philox rng(c.seed, static_cast<std::uint64_t>(id));
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(c.N, c.N);
    if (want(0)) visit(0, U);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c.N);
    for (long s = 1; s <= last_step; ++s) {
        es.compute(gue_sample(c.N, rng));
        Eigen::VectorXcd phase(c.N);
        for (int i = 0; i < c.N; ++i) phase[i] = std::polar(1.0, c.sqrt_dt * es.eigenvalues()[i]);
        U = U * (es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint());
        if (s % c.reunitarize_every == 0) reunitarize(U);
        if (want(s)) visit(s, U);
    }
}

void validate(const SimConfig& c) {
    if (c.N < 1) throw DomainError("simulate: N must be >= 1");
    if (!(c.sqrt_dt > 0.0) || c.sqrt_dt > 0.05) throw DomainError("simulate: sqrt_dt must lie in (0, 0.05]");
    if (c.n_steps < 0) throw DomainError("simulate: n_steps must be >= 0");
    if (c.n_trajectories < 1) throw DomainError("simulate: n_trajectories must be >= 1");
    if (c.reunitarize_every < 1) throw DomainError("simulate: reunitarize_every must be >= 1");
}

template <class F>
void parallel_for(long n, int threads, F f) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<long>(n, 1 << 16))));
    if (threads == 1) {
        for (long i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (long i = w; i < n; i += threads) f(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {
    ctr_[2] = static_cast<std::uint32_t>(stream);
    ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
}

std::array<std::uint32_t, 4> Philox::block(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    constexpr std::uint64_t M0 = 0xD2511F53, M1 = 0xCD9E8D57;
    constexpr std::uint32_t W0 = 0x9E3779B9, W1 = 0xBB67AE85;
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = M0 * c[0], p1 = M1 * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += W0;
        k[1] += W1;
    }
    return c;
}

Philox::result_type Philox::operator()() {
    if (pos_ == 4) {
        buf_ = block(ctr_, key_);
        if (++ctr_[0] == 0) ++ctr_[1];
        pos_ = 0;
    }
    return buf_[pos_++];
}

HermitianMatrix gue_sample(int N, Philox& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const double h = std::sqrt(0.5);
    HermitianMatrix M(N, N);
    for (int i = 0; i < N; ++i) {
        M(i, i) = g(rng);
        for (int j = i + 1; j < N; ++j) {
            const double re = h * g(rng), im = h * g(rng);
            M(i, j) = cplx(re, im);
            M(j, i) = cplx(re, -im);
        }
    }
    return M;
}

std::vector<double> match_angles(const std::vector<double>& prev, std::vector<double> next) {
    const size_t n = prev.size();
    if (next.size() != n) throw DomainError("match_angles: size mismatch");
    std::vector<double> out(n);
    std::vector<char> used(n, 0);
    double worst = 0.0;
    for (size_t i = 0; i < n; ++i) {
        size_t best = n;
        double bd = 1e300;
        for (size_t j = 0; j < n; ++j)
            if (!used[j] && cyc(prev[i], next[j]) < bd) bd = cyc(prev[i], next[j]), best = j;
        used[best] = 1;
        out[i] = next[best];
        worst = std::max(worst, bd);
    }
    if (worst <= kPi / 4) return out;
    // Eigen-angles cannot cross, so the right labelling is a rotation of the
    // sorted order; take the rotation with the smallest total move.
    std::vector<size_t> po(n);
    for (size_t i = 0; i < n; ++i) po[i] = i;
    std::sort(po.begin(), po.end(), [&](size_t a, size_t b) { return prev[a] < prev[b]; });
    std::sort(next.begin(), next.end());
    size_t best_r = 0;
    double best = 1e300;
    for (size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += cyc(prev[po[i]], next[(i + r) % n]);
        if (s < best) best = s, best_r = r;
    }
    for (size_t i = 0; i < n; ++i) out[po[i]] = next[(i + best_r) % n];
    return out;
}

Trajectory evolve(const SimConfig& c, long id) {
    validate(c);
    Trajectory tr;
    run(c, id, c.n_steps, [](long) { return true; }, [&](long s, const Eigen::MatrixXcd& U) {
        std::vector<double> a = eigen_angles(U);
        if (s == 0) {
            std::sort(a.begin(), a.end());
        } else {
            a = match_angles(tr.angles.back(), std::move(a));
            for (int i = 0; i < c.N; ++i)
                tr.max_displacement = std::max(tr.max_displacement, cyc(a[i], tr.angles.back()[i]));
        }
        tr.times.push_back(c.time_at(s));
        tr.angles.push_back(std::move(a));
    });
    return tr;
}

SweepTable trajectory_table(const Trajectory& tr) {
    SweepTable t({"step", "t", "angle_index", "angle"});
    for (size_t s = 0; s < tr.angles.size(); ++s)
        for (size_t i = 0; i < tr.angles[s].size(); ++i)
            t.add_row({std::int64_t(s), tr.times[s], std::int64_t(i), tr.angles[s][i]});
    return t;
}

std::vector<long> checkpoint_steps(const SimConfig& c, const std::vector<double>& times) {
    std::vector<long> steps;
    for (double t : times) {
        if (!(t >= 0.0)) throw DomainError("checkpoint_steps: times must be >= 0");
        steps.push_back(std::lround(t / (c.N * c.dt())));
    }
    return steps;
}

std::vector<std::vector<std::vector<double>>> sample_angles(const SimConfig& c, const std::vector<long>& steps,
                                                            int threads) {
    validate(c);
    long last = 0;
    for (long s : steps) last = std::max(last, s);
    std::vector<std::vector<std::vector<double>>> out(c.n_trajectories,
                                                      std::vector<std::vector<double>>(steps.size()));
    parallel_for(c.n_trajectories, threads, [&](long id) {
        run(c, id, last, [&](long s) { return std::find(steps.begin(), steps.end(), s) != steps.end(); },
            [&](long s, const Eigen::MatrixXcd& U) {
                auto a = eigen_angles(U);
                for (size_t j = 0; j < steps.size(); ++j)
                    if (steps[j] == s) out[id][j] = a;
            });
    });
    return out;
}

SweepTable mc_observables(const SimConfig& c, const std::vector<int>& ks, const std::vector<double>& ts,
                          int threads) {
    if (c.n_trajectories < 100) throw DomainError("mc_observables: need at least 100 trajectories");
    const auto steps = checkpoint_steps(c, ts);
    const auto ang = sample_angles(c, steps, threads);
    const double n = double(c.n_trajectories);
    SweepTable tab({"k", "t", "m_re", "m_im", "m_stderr", "sff", "sff_stderr", "abs2_mean"});
    for (size_t j = 0; j < steps.size(); ++j)
        for (int k : ks) {
            // Z = Σ e^{ikx}; reduced in trajectory order
            std::vector<cplx> Z(c.n_trajectories);
            for (long i = 0; i < c.n_trajectories; ++i) {
                cplx z = 0.0;
                for (double x : ang[i][j]) z += std::polar(1.0, k * x);
                Z[i] = z;
            }
            cplx mean = 0.0;
            double abs2 = 0.0;
            for (const cplx& z : Z) mean += z, abs2 += std::norm(z);
            mean /= n;
            abs2 /= n;
            double var_re = 0.0, cov = 0.0, cov2 = 0.0;
            for (const cplx& z : Z) {
                const double d = std::norm(z - mean);
                var_re += (z.real() - mean.real()) * (z.real() - mean.real());
                cov += d;
                cov2 += d * d;
            }
            const double S = cov / (n - 1.0);
            const double S_sd = std::sqrt(std::max(0.0, (cov2 - cov * cov / n) / (n - 1.0)));
            // m_k = ⟨(1/N)Σe^{−ikx}⟩ = conj(mean)/N
            tab.add_row({std::int64_t(k), c.time_at(steps[j]), mean.real() / c.N, -mean.imag() / c.N,
                         std::sqrt(var_re / (n - 1.0) / n) / c.N, S, S_sd / std::sqrt(n), abs2});
        }
    return tab;
}

double bin_occupancy(const std::vector<std::vector<std::vector<double>>>& ang, int cp, int bins) {
    if (bins < 1) throw DomainError("bin_occupancy: bins must be positive");
    std::vector<char> hit(bins, 0);
    for (const auto& tr : ang)
        for (double x : tr.at(cp)) {
            int b = static_cast<int>(std::floor((x + kPi) / (2.0 * kPi) * bins));
            hit[std::clamp(b, 0, bins - 1)] = 1;
        }
    return double(std::count(hit.begin(), hit.end(), 1)) / bins;
}

}  // namespace ubmot
