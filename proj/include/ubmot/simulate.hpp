#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ubmot/table.hpp"

namespace ubmot {

// Philox4x32-10 keyed by (seed, stream).  Satisfies UniformRandomBitGenerator.
class Philox {
public:
    using result_type = std::uint32_t;

    Philox(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return 0xffffffffu; }
    result_type operator()();

    // Raw block for counter (c0..c3) under key (k0, k1).
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key);

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_{};
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

using HermitianMatrix = Eigen::MatrixXcd;

// Density ∝ exp(−Tr M²/2): diagonal N(0,1), off-diagonal real and imaginary
// parts N(0,1/2).
HermitianMatrix gue_sample(int N, Philox& rng);

struct SimConfig {
    int N = 1;
    double sqrt_dt = 0.02;
    long n_steps = 1;
    long n_trajectories = 1;
    std::uint64_t seed = 0;
    int reunitarize_every = 50;

    double dt() const { return sqrt_dt * sqrt_dt; }
    double time_at(long step) const { return double(step) * N * dt(); }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> angles;  // per step, N values in (−π, π]
    double max_displacement = 0.0;            // largest matched step-to-step move
};

// One trajectory (stream trajectory_id of config.seed), angles at every step.
Trajectory evolve(const SimConfig& config, long trajectory_id = 0);

// Rows: step, t, angle_index, angle.
SweepTable trajectory_table(const Trajectory& tr);

// Angles of every trajectory at the given steps only; [trajectory][checkpoint][angle].
std::vector<std::vector<std::vector<double>>> sample_angles(const SimConfig& config,
                                                            const std::vector<long>& steps,
                                                            int threads = 1);

// Nearest step to each requested time.
std::vector<long> checkpoint_steps(const SimConfig& config, const std::vector<double>& times);

// Columns k, t, m_re, m_im, m_stderr, sff, sff_stderr, abs2_mean.  t is the
// simulated time of the step nearest each requested checkpoint.
SweepTable mc_observables(const SimConfig& config, const std::vector<int>& k_list,
                          const std::vector<double>& t_checkpoints, int threads = 1);

// Fraction of equal-width bins on (−π, π] hit by at least one angle.
double bin_occupancy(const std::vector<std::vector<std::vector<double>>>& angles, int checkpoint,
                     int bins);

// Cyclic nearest-neighbour relabelling of `next` against `prev`; falls back
// to the best rotation of the sorted order when a move exceeds π/4.
std::vector<double> match_angles(const std::vector<double>& prev, std::vector<double> next);

}  // namespace ubmot
