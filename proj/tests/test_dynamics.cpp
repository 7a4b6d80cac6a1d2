#include "doctest.h"

#include <cmath>
#include <random>

#include "freezing/dynamics.hpp"
#include "freezing/finfree.hpp"
#include "oracles.hpp"

using namespace freezing;

TEST_CASE("gaussian_gk") {
    const GkTrajectory z2 = gaussian_gk(RootTuple::zeros(2));
    for (double t : {0.0, 0.5, 2.0}) {
        const auto g = z2.at(t);
        CHECK(g[0] == 1.0);
        CHECK(g[1] == 0.0);
        CHECK(g[2] == doctest::Approx(-t));
    }
    const GkTrajectory z5 = gaussian_gk(RootTuple::zeros(5));
    for (double t : {0.3, 1.7}) {
        const auto g = z5.at(t);
        CHECK(g[1] == 0.0);
        CHECK(g[3] == 0.0);
        CHECK(g[5] == 0.0);
        // g_{2m} = (-t/2)^m N!/(m!(N-2m)!)
        CHECK(g[4] == doctest::Approx(t * t / 4.0 * 120.0 / (2.0 * 1.0)));
    }
    const GkTrajectory init = gaussian_gk(RootTuple{1.0, 2.0});
    CHECK(init.at(0.7)[1] == doctest::Approx(3.0));
    CHECK(init.at(0.7)[2] == doctest::Approx(2.0 - 0.7));

    // Derivative identity as exact polynomials.
    std::mt19937_64 rng(1);
    const RootTuple a(oracle::random_sorted(rng, 6, -2.0, 2.0));
    const GkTrajectory tr = gaussian_gk(a);
    const auto e = elementary_symmetric(a);
    for (std::size_t k = 0; k <= 6; ++k) {
        CHECK(tr.at(0.0)[k] == doctest::Approx(e[k]));
    }
    for (std::size_t k = 2; k <= 6; ++k) {
        const Polynomial d = tr.coeff_polys[k].derivative();
        const double c = (6.0 - k + 1.0) * (6.0 - k + 2.0) / 2.0;
        for (double t : {0.1, 1.0, 3.0}) {
            CHECK(d(t) == doctest::Approx(-c * tr.coeff_polys[k - 2](t)));
        }
    }
}

TEST_CASE("laguerre_gk") {
    const GkTrajectory z = laguerre_gk(RootTuple::zeros(2), 1.0);
    CHECK(z.at(1.5)[1] == doctest::Approx(6.0));
    CHECK(z.at(1.5)[2] == doctest::Approx(2.0 * 2.25));
    CHECK(laguerre_gk(RootTuple{1.0}, 2.0).at(0.5)[1] == doctest::Approx(2.0));

    const double alpha = 1.7, t = 0.8;
    const std::size_t n = 4;
    const auto g = laguerre_gk(RootTuple::zeros(n), alpha).at(t);
    double prod = 1.0, fact = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        prod *= (n - k + 1.0) * (n - k + alpha);
        fact *= static_cast<double>(k);
        CHECK(g[k] == doctest::Approx(std::pow(t, static_cast<double>(k)) / fact * prod));
    }
    CHECK_THROWS_AS(laguerre_gk(RootTuple{-1.0, 1.0}, 1.0), InvalidParameter);
    CHECK_THROWS_AS(laguerre_gk(RootTuple{1.0, 1.0}, 0.0), InvalidParameter);
}

TEST_CASE("limit_roots and closed forms") {
    CHECK(limit_roots(gaussian_gk(RootTuple::zeros(2)), 1.0).max_distance(RootTuple{-1.0, 1.0}) < 1e-14);
    for (std::size_t n = 1; n <= 8; ++n) {
        CHECK(limit_roots(gaussian_gk(RootTuple::zeros(n)), 2.5).max_distance(hermite_roots(n, 2.5)) < 1e-9);
    }
    CHECK(limit_roots(laguerre_gk(RootTuple::zeros(2), 1.0), 1.0)
              .max_distance(RootTuple{2.0 - std::sqrt(2.0), 2.0 + std::sqrt(2.0)}) < 1e-13);

    CHECK(gaussian_limit_closed(RootTuple::zeros(3), 4.0).max_distance(hermite_roots(3).scaled(2.0)) < 1e-14);
    const RootTuple a{-0.3, 0.1, 2.0};
    CHECK(gaussian_limit_closed(a, 0.0).max_distance(a) < 1e-12);
    CHECK(gaussian_limit_closed(RootTuple{-1.0, 1.0}, 1.0).max_distance(RootTuple{-std::sqrt(2.0), std::sqrt(2.0)}) <
          1e-14);

    for (double alpha : {2.0, 3.5}) {
        CHECK(laguerre_limit_closed(RootTuple::zeros(2), alpha, 1.3).max_distance(laguerre_roots(2, alpha, 1.3)) <
              1e-9);
    }
    const RootTuple b{1.0, 4.0};
    CHECK(laguerre_limit_closed(b, 2.0, 0.0).max_distance(b) < 1e-12);
    CHECK(laguerre_limit_closed(b, 2.0, 1.0).max_distance(limit_roots(laguerre_gk(b, 2.0), 1.0)) < 1e-8);
    CHECK_THROWS_AS(laguerre_limit_closed(b, 1.5, 1.0), InvalidParameter);
}

TEST_CASE("route equivalence on random tuples") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const RootTuple a(oracle::random_sorted(rng, n, -3.0, 3.0));
        const RootTuple pos(oracle::random_sorted(rng, n, 0.0, 4.0));
        const double alpha = static_cast<double>(n) - 0.5 + 0.25 + 0.5 * (trial % 3);
        for (double t : {0.1, 1.0, 4.0}) {
            CHECK(limit_roots(gaussian_gk(a), t).max_distance(gaussian_limit_closed(a, t)) < 1e-8);
            CHECK(limit_roots(laguerre_gk(pos, alpha), t).max_distance(laguerre_limit_closed(pos, alpha, t)) < 1e-8);
        }
        // semigroup in time
        CHECK(gaussian_limit_closed(gaussian_limit_closed(a, 0.4), 1.1).max_distance(gaussian_limit_closed(a, 1.5)) <
              1e-8);
    }
}

TEST_CASE("symmetric inputs stay symmetric") {
    const RootTuple a{-2.0, -0.5, 0.5, 2.0};
    for (double t : {0.1, 1.0, 10.0}) {
        const RootTuple y = gaussian_limit_closed(a, t);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(y[i] + y[3 - i]) < 1e-10);
        }
    }
}

TEST_CASE("Laguerre parameter addition from zero start") {
    const std::size_t n = 4;
    for (double a1 : {0.5, 1.0}) {
        for (double a2 : {1.0, 2.5}) {
            for (double t : {0.5, 2.0}) {
                const RootTuple x1 = limit_roots(laguerre_gk(RootTuple::zeros(n), a1), t);
                const RootTuple x2 = limit_roots(laguerre_gk(RootTuple::zeros(n), a2), t);
                const RootTuple x3 = limit_roots(laguerre_gk(RootTuple::zeros(n), a1 + a2 + n - 1.0), t);
                CHECK(boxplus(x1, x2).max_distance(x3) < 1e-8 * std::max(1.0, t * (a1 + a2 + 3.0 * n)));
            }
        }
    }
}

TEST_CASE("symmetric_square_map") {
    CHECK(symmetric_square_map(RootTuple{-2.0, -1.0, 1.0, 2.0}) == RootTuple{0.5, 2.0});
    CHECK(symmetric_square_map(RootTuple{-1.0, 0.0, 1.0}) == RootTuple{0.5});
    CHECK(symmetric_square_map(RootTuple::zeros(4)) == RootTuple::zeros(2));
    CHECK_THROWS_AS(symmetric_square_map(RootTuple{-2.0, -1.0, 1.0, 3.0}), NotSymmetric);
}

TEST_CASE("moment_sequence") {
    const MomentSequence u3 = moment_sequence(3, 4);
    CHECK(u3.u == std::vector<double>{1.0, 0.0, 2.0, 0.0, 6.0});
    for (std::size_t n = 1; n <= 8; ++n) {
        const MomentSequence u = moment_sequence(n, 10);
        CHECK(u.u[2] == doctest::Approx(n - 1.0));
        const RootTuple z = hermite_roots(n);
        for (std::size_t k = 0; k <= 10; ++k) {
            double ref = 0.0;
            for (double v : z) {
                ref += std::pow(v, static_cast<double>(k));
            }
            ref /= static_cast<double>(n);
            if (k % 2 == 1) {
                CHECK(u.u[k] == 0.0);
                CHECK(std::abs(ref) < 1e-9 * std::max(1.0, u.u[k - 1]));
            } else {
                CHECK(std::abs(u.u[k] - ref) <= 1e-9 * std::max(1.0, std::abs(u.u[k])));
            }
        }
        CHECK(u.m(4, 2.0) == doctest::Approx(u.u[4] * 4.0));
    }
}
