#pragma once

#include <optional>
#include <vector>

#include "freezing/elemsym.hpp"
#include "freezing/orthopoly.hpp"

namespace freezing {

enum class ProcessKind { gaussian, laguerre };

/// Exact polynomial-in-time solution g_0(t), ..., g_N(t) of the linear
/// system satisfied by the elementary symmetric values of the freezing limit.
struct GkTrajectory {
    ProcessKind kind = ProcessKind::gaussian;
    double alpha = 0.0; // laguerre only
    RootTuple initial;
    std::vector<Polynomial> coeff_polys;

    std::size_t n() const noexcept { return initial.size(); }
    /// (g_0(t), ..., g_N(t))
    std::vector<double> at(double t) const;
};

/// u_0..u_max with m_n(t) = u_n t^{n/2}.
struct MomentSequence {
    std::vector<double> u;
    std::size_t n = 0;

    double m(std::size_t order, double t) const;
};

/// g_k = e_k(a) - (N-k+1)(N-k+2)/2 * integral_0^t g_{k-2}.
GkTrajectory gaussian_gk(const RootTuple& initial);
/// g_k = e_k(a) + (N-k+1)(N-k+alpha) * integral_0^t g_{k-1}.
GkTrajectory laguerre_gk(const RootTuple& initial, double alpha);

/// Sorted roots of sum_k (-1)^k g_k(t) x^{N-k}.
RootTuple limit_roots(const GkTrajectory& traj, double t, std::optional<double> tol = std::nullopt);

/// initial boxplus_N sqrt(t) (Hermite zeros).
RootTuple gaussian_limit_closed(const RootTuple& initial, double t);

/// Laguerre limit through the Gaussian process of size 2N started from
/// (-sqrt(2 a_N), ..., sqrt(2 a_N)), then boxplus_N with t (Laguerre zeros of
/// parameter alpha - N + 1/2). Requires alpha > N - 1/2.
RootTuple laguerre_limit_closed(const RootTuple& initial, double alpha, double t);

/// (y_{N+1}^2/2, ..., y_{2N}^2/2) for a symmetric tuple of size 2N; for odd
/// size 2N+1 the middle (zero) coordinate is excluded.
RootTuple symmetric_square_map(const RootTuple& y, double tol = 1e-9);

/// u_{2n} = -(2n-1) u_{2n-2} + N sum_{j<n} u_{2j} u_{2n-2-2j}, odd entries 0.
MomentSequence moment_sequence(std::size_t n_sys, std::size_t max_order);

} // namespace freezing
