#include "freezing/dynamics.hpp"

#include <cmath>

#include "freezing/finfree.hpp"

namespace freezing {

std::vector<double> GkTrajectory::at(double t) const {
    std::vector<double> g(coeff_polys.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        g[k] = coeff_polys[k](t);
    }
    return g;
}

double MomentSequence::m(std::size_t order, double t) const {
    return u.at(order) * std::pow(t, 0.5 * static_cast<double>(order));
}

namespace {

Polynomial integrate_scaled(const Polynomial& p, double factor, double constant) {
    Polynomial q = p.primitive();
    for (double& c : q.coeffs) {
        c *= factor;
    }
    q.coeffs[0] = constant;
    return q;
}

} // namespace

GkTrajectory gaussian_gk(const RootTuple& initial) {
    const std::size_t n = initial.size();
    const std::vector<double> e = elementary_symmetric(initial);
    GkTrajectory traj{ProcessKind::gaussian, 0.0, initial, {}};
    traj.coeff_polys.reserve(n + 1);
    traj.coeff_polys.push_back(Polynomial{{1.0}});
    traj.coeff_polys.push_back(Polynomial{{e[1]}});
    for (std::size_t k = 2; k <= n; ++k) {
        const double c = static_cast<double>((n - k + 1) * (n - k + 2)) / 2.0;
        traj.coeff_polys.push_back(integrate_scaled(traj.coeff_polys[k - 2], -c, e[k]));
    }
    traj.coeff_polys.resize(n + 1);
    return traj;
}

GkTrajectory laguerre_gk(const RootTuple& initial, double alpha) {
    if (!(alpha > 0.0)) {
        throw InvalidParameter("laguerre_gk requires alpha > 0");
    }
    if (initial[0] < 0.0) {
        throw InvalidParameter("laguerre_gk requires a nonnegative initial tuple");
    }
    const std::size_t n = initial.size();
    const std::vector<double> e = elementary_symmetric(initial);
    GkTrajectory traj{ProcessKind::laguerre, alpha, initial, {}};
    traj.coeff_polys.reserve(n + 1);
    traj.coeff_polys.push_back(Polynomial{{1.0}});
    for (std::size_t k = 1; k <= n; ++k) {
        const double c = static_cast<double>(n - k + 1) * (static_cast<double>(n - k) + alpha);
        traj.coeff_polys.push_back(integrate_scaled(traj.coeff_polys[k - 1], c, e[k]));
    }
    return traj;
}

RootTuple limit_roots(const GkTrajectory& traj, double t, std::optional<double> tol) {
    if (!(t >= 0.0)) {
        throw InvalidParameter("limit_roots requires t >= 0");
    }
    std::vector<double> g = traj.at(t);
    g[0] = 1.0;
    return roots_of_monic(MonicPolynomial(std::move(g)), tol);
}

RootTuple gaussian_limit_closed(const RootTuple& initial, double t) {
    if (!(t >= 0.0)) {
        throw InvalidParameter("gaussian_limit_closed requires t >= 0");
    }
    return boxplus(initial, hermite_roots(initial.size(), t));
}

RootTuple laguerre_limit_closed(const RootTuple& initial, double alpha, double t) {
    const std::size_t n = initial.size();
    const double shifted = alpha - static_cast<double>(n) + 0.5;
    if (!(shifted > 0.0)) {
        throw InvalidParameter("closed-form Laguerre limit requires alpha > N - 1/2");
    }
    if (!(t >= 0.0)) {
        throw InvalidParameter("laguerre_limit_closed requires t >= 0");
    }
    if (initial[0] < 0.0) {
        throw InvalidParameter("Laguerre initial tuple must be nonnegative");
    }
    std::vector<double> sym(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::sqrt(2.0 * initial[i]);
        sym[n + i] = r;
        sym[n - 1 - i] = -r;
    }
    const RootTuple y = gaussian_limit_closed(RootTuple(std::move(sym)), t);
    const RootTuple half_alpha_process = symmetric_square_map(y, 1e-7 * std::max(1.0, std::abs(y[0])));
    return boxplus(half_alpha_process, laguerre_roots(n, shifted, t));
}

RootTuple symmetric_square_map(const RootTuple& y, double tol) {
    const std::size_t m = y.size();
    if (m < 2) {
        throw InvalidParameter("symmetric_square_map needs at least two coordinates");
    }
    for (std::size_t i = 0; i < m / 2; ++i) {
        if (std::abs(y[i] + y[m - 1 - i]) > tol) {
            throw NotSymmetric("tuple is not symmetric about the origin");
        }
    }
    if (m % 2 == 1 && std::abs(y[m / 2]) > tol) {
        throw NotSymmetric("odd-size symmetric tuple must have a zero middle coordinate");
    }
    const std::size_t n = m / 2;
    const std::size_t first = m - n; // N for even size, N+1 for odd
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Average the mirrored pair so rounding asymmetry cancels.
        const double r = 0.5 * (y[first + i] - y[n - 1 - i]);
        x[i] = 0.5 * r * r;
    }
    return RootTuple(std::move(x));
}

MomentSequence moment_sequence(std::size_t n_sys, std::size_t max_order) {
    if (n_sys < 1) {
        throw InvalidParameter("moment_sequence requires N >= 1");
    }
    const double nn = static_cast<double>(n_sys);
    MomentSequence ms{std::vector<double>(max_order + 1, 0.0), n_sys};
    ms.u[0] = 1.0;
    for (std::size_t k = 1; 2 * k <= max_order; ++k) {
        double conv = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            conv += ms.u[2 * j] * ms.u[2 * k - 2 - 2 * j];
        }
        ms.u[2 * k] = -static_cast<double>(2 * k - 1) * ms.u[2 * k - 2] + nn * conv;
    }
    return ms;
}

} // namespace freezing
