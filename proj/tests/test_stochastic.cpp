#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "freezing/finfree.hpp"
#include "freezing/stochastic.hpp"

using namespace freezing;

namespace {

SimConfig base_config(std::size_t paths, double beta, RootTuple init, double t_end, double dt) {
    SimConfig c;
    c.beta = beta;
    c.n = init.size();
    c.initial = std::move(init);
    c.t_end = t_end;
    c.dt = dt;
    c.paths = paths;
    c.seed = 2024;
    c.record_times = {t_end};
    return c;
}

double sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    return s;
}

// E[(1/2)(l1^2 + l2^2)] for the beta = 2, N = 2 Gaussian ensemble, density
// proportional to |l1 - l2|^2 exp(-(l1^2 + l2^2) / 2), by midpoint quadrature.
double gbe_n2_second_moment_by_grid() {
    const double lim = 9.0;
    const int cells = 900;
    const double h = 2.0 * lim / cells;
    double z = 0.0, m = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double x = -lim + (i + 0.5) * h;
        for (int j = 0; j < cells; ++j) {
            const double y = -lim + (j + 0.5) * h;
            const double w = (x - y) * (x - y) * std::exp(-(x * x + y * y) / 2.0);
            z += w;
            m += w * (x * x + y * y) / 2.0;
        }
    }
    return m / z;
}

} // namespace

TEST_CASE("T = 0 and t = 0 records return the initial tuple") {
    const RootTuple a{-0.7, 0.2, 1.5};
    SimConfig c = base_config(5, 2.0, a, 0.0, 1e-3);
    const PathEnsemble e = simulate_dyson(c);
    for (std::size_t p = 0; p < 5; ++p) {
        const auto x = e.at(p, 0);
        CHECK(std::vector<double>(x.begin(), x.end()) == a.vector());
    }
    SimConfig l = base_config(3, 2.0, RootTuple{0.5, 1.0, 2.0}, 0.5, 1e-3);
    l.alpha = 1.0;
    l.record_times = {0.0, 0.5};
    const PathEnsemble le = simulate_laguerre(l);
    for (std::size_t p = 0; p < 3; ++p) {
        const auto x = le.at(p, 0);
        CHECK(std::vector<double>(x.begin(), x.end()) == l.initial.vector());
    }
}

TEST_CASE("ordering, positivity and validation") {
    SimConfig c = base_config(200, 1.0, RootTuple::zeros(4), 1.0, 1e-3);
    c.record_times = {0.1, 0.5, 1.0};
    const PathEnsemble g = simulate_dyson(c);
    c.alpha = 0.5;
    const PathEnsemble l = simulate_laguerre(c);
    for (std::size_t p = 0; p < 200; ++p) {
        for (std::size_t r = 0; r < 3; ++r) {
            const auto x = g.at(p, r);
            const auto y = l.at(p, r);
            CHECK(std::is_sorted(x.begin(), x.end()));
            CHECK(std::is_sorted(y.begin(), y.end()));
            CHECK(y[0] >= 0.0);
        }
    }
    CHECK(g.gap_clamps > 0); // zero start touches the floor
    SimConfig bad = c;
    bad.beta = 0.5;
    CHECK_THROWS_AS(simulate_dyson(bad), InvalidParameter);
    bad = c;
    bad.n = 3;
    CHECK_THROWS_AS(simulate_dyson(bad), DimensionMismatch);
    bad = c;
    bad.record_times = {0.5, 0.2};
    CHECK_THROWS_AS(simulate_dyson(bad), InvalidParameter);
    bad = c;
    bad.initial = RootTuple{-1.0, 0.0, 1.0, 2.0};
    CHECK_THROWS_AS(simulate_laguerre(bad), InvalidParameter);
    bad = base_config(1, 1.0, RootTuple{0.0, 2e8}, 0.1, 1e-2);
    CHECK_THROWS_AS(simulate_dyson(bad), StepUnstable);
}

TEST_CASE("bit-identical results regardless of thread count") {
    SimConfig c = base_config(37, 4.0, RootTuple{-1.0, 0.0, 1.0}, 0.3, 1e-3);
    c.record_times = {0.1, 0.3};
    setenv("FREEZING_DYSON_THREADS", "1", 1);
    const PathEnsemble one = simulate_dyson(c);
    const auto gbe_one = sample_gbe_batch(3.0, 4, 50, 9);
    setenv("FREEZING_DYSON_THREADS", "4", 1);
    const PathEnsemble four = simulate_dyson(c);
    const auto gbe_four = sample_gbe_batch(3.0, 4, 50, 9);
    unsetenv("FREEZING_DYSON_THREADS");
    CHECK(one.data == four.data);
    CHECK(gbe_one == gbe_four);
    // path p does not depend on how many paths run
    SimConfig few = c;
    few.paths = 5;
    const PathEnsemble part = simulate_dyson(few);
    CHECK(std::equal(part.data.begin(), part.data.end(), one.data.begin()));
}

TEST_CASE("freezing LLN, small run") {
    SimConfig c = base_config(200, 1e6, RootTuple::zeros(3), 1.0, 1e-4);
    const PathEnsemble g = simulate_dyson(c);
    const RootTuple z = hermite_roots(3);
    int hits = 0;
    for (std::size_t p = 0; p < 200; ++p) {
        const auto x = g.at(p, 0);
        double d = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            d = std::max(d, std::abs(x[i] - z[i]));
        }
        hits += d < 0.02;
    }
    CHECK(hits >= 190);

    SimConfig l = base_config(200, 1e6, RootTuple::zeros(2), 1.0, 1e-4);
    l.alpha = 1.0;
    const PathEnsemble le = simulate_laguerre(l);
    const RootTuple lz{2.0 - std::sqrt(2.0), 2.0 + std::sqrt(2.0)};
    hits = 0;
    for (std::size_t p = 0; p < 200; ++p) {
        const auto x = le.at(p, 0);
        hits += std::max(std::abs(x[0] - lz[0]), std::abs(x[1] - lz[1])) < 0.05;
    }
    CHECK(hits >= 190);
}

TEST_CASE("trace laws") {
    const std::size_t m = 10000;
    const RootTuple a{-1.5, -0.5, 0.5, 1.5};
    SimConfig c = base_config(m, 1.0, a, 1.0, 1e-3);
    const PathEnsemble g = simulate_dyson(c);
    double s = 0.0, s2 = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
        const double e1 = sum(g.at(p, 0)) - sum(a.values());
        s += e1;
        s2 += e1 * e1;
    }
    const double mean = s / m;
    const double var = (s2 - m * mean * mean) / (m - 1.0);
    CHECK(std::abs(mean) < 3.0 * std::sqrt(2.0 * 4.0 * 1.0 / 1.0) / std::sqrt(static_cast<double>(m)));
    // martingale variance 2NT/beta; stderr of a sample variance ~ var sqrt(2/(m-1))
    CHECK(std::abs(var - 8.0) < 3.0 * 8.0 * std::sqrt(2.0 / (m - 1.0)));

    const RootTuple b{0.5, 1.0, 2.0, 3.0};
    SimConfig l = base_config(m, 4.0, b, 1.0, 1e-3);
    l.alpha = 1.5;
    const PathEnsemble le = simulate_laguerre(l);
    s = 0.0;
    s2 = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
        const double tr = sum(le.at(p, 0));
        s += tr;
        s2 += tr * tr;
    }
    const double lm = s / m;
    const double lse = std::sqrt((s2 / m - lm * lm) / (m - 1.0));
    const double target = sum(b.values()) + 4.0 * (1.5 + 3.0) * 1.0;
    CHECK(std::abs(lm - target) < 3.0 * lse + 5.0 * 1e-3 * target);
}

TEST_CASE("static Gaussian ensemble") {
    const RootTuple z = hermite_roots(4);
    for (std::uint64_t s = 0; s < 20; ++s) {
        CHECK(sample_gbe(1e8, 4, 3, s).max_distance(z) < 1e-3);
    }
    const std::size_t m = 100000;
    const double beta = 3.0;
    const auto one = sample_gbe_batch(beta, 1, m, 17);
    double s1 = 0.0, s2 = 0.0;
    for (double v : one) {
        s1 += v;
        s2 += v * v;
    }
    const double var = (s2 - s1 * s1 / m) / (m - 1.0);
    CHECK(std::abs(var - 2.0 / beta) < 0.05 * 2.0 / beta);

    const auto two = sample_gbe_batch(2.0, 2, m, 19);
    double acc = 0.0, acc2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double v = (two[2 * i] * two[2 * i] + two[2 * i + 1] * two[2 * i + 1]) / 2.0;
        acc += v;
        acc2 += v * v;
    }
    const double mean = acc / m;
    const double se = std::sqrt((acc2 / m - mean * mean) / (m - 1.0));
    const double oracle = gbe_n2_second_moment_by_grid();
    CHECK(oracle == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(mean - oracle) < 3.0 * se);
    CHECK_THROWS_AS(sample_gbe(0.0, 3, 1), InvalidParameter);
}

TEST_CASE("static Laguerre ensemble") {
    const RootTuple z = laguerre_roots(3, 2.0);
    for (std::uint64_t s = 0; s < 20; ++s) {
        CHECK(sample_ble(1e8, 2.0, 3, 5, s).max_distance(z) < 1e-3);
    }
    const std::size_t m = 100000;
    const double alpha = 1.3, beta = 2.0;
    const auto one = sample_ble_batch(beta, alpha, 1, m, 23);
    double s1 = 0.0, s2 = 0.0;
    for (double v : one) {
        CHECK_UNARY(v >= 0.0);
        s1 += v;
        s2 += v * v;
    }
    const double mean = s1 / m;
    const double se = std::sqrt((s2 / m - mean * mean) / (m - 1.0));
    CHECK(std::abs(mean - alpha) < 3.0 * se);
    const auto many = sample_ble_batch(0.7, 0.4, 5, 2000, 29);
    CHECK(*std::min_element(many.begin(), many.end()) >= 0.0);
    CHECK_THROWS_AS(sample_ble(1.0, 0.0, 3, 1), InvalidParameter);
}
