#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "freezing/dynamics.hpp"
#include "freezing/elemsym.hpp"

namespace freezing {

struct SimConfig {
    double beta = 1.0;
    std::size_t n = 0;
    double alpha = 1.0; // laguerre only
    double t_end = 1.0;
    double dt = 1e-3;
    RootTuple initial;
    std::uint64_t seed = 0;
    std::size_t paths = 1;
    std::vector<double> record_times;

    /// Throws InvalidParameter on any broken invariant.
    void validate(ProcessKind kind) const;
};

/// Ordered particle positions, path-major: data[(p * R + r) * N + i].
struct PathEnsemble {
    SimConfig config;
    ProcessKind kind = ProcessKind::gaussian;
    std::vector<double> data;
    /// Denominators replaced by +-gap_floor, summed over all paths.
    std::uint64_t gap_clamps = 0;
    /// Euler steps actually taken (adaptive refinements included).
    std::uint64_t steps = 0;

    std::size_t paths() const noexcept { return config.paths; }
    std::size_t times() const noexcept { return config.record_times.size(); }
    std::size_t n() const noexcept { return config.n; }
    std::span<const double> at(std::size_t path, std::size_t time) const;
};

inline constexpr double gap_floor = 1e-8;
inline constexpr double unstable_bound = 1e8;

PathEnsemble simulate_dyson(const SimConfig& cfg);
PathEnsemble simulate_laguerre(const SimConfig& cfg);
PathEnsemble simulate(ProcessKind kind, const SimConfig& cfg);

/// Eigenvalues of the tridiagonal Gaussian beta ensemble matrix.
RootTuple sample_gbe(double beta, std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);
/// Eigenvalues of B^T B for the bidiagonal chi matrix B of the beta Laguerre ensemble.
RootTuple sample_ble(double beta, double alpha, std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);

/// Sample s uses stream s; row-major M x N.
std::vector<double> sample_gbe_batch(double beta, std::size_t n, std::size_t samples, std::uint64_t seed);
std::vector<double> sample_ble_batch(double beta, double alpha, std::size_t n, std::size_t samples,
                                     std::uint64_t seed);

/// Worker count: hardware concurrency, capped by FREEZING_DYSON_THREADS.
std::size_t worker_threads();
/// Runs body(begin, end) over contiguous chunks of [0, count).
void parallel_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace freezing
