#include "doctest.h"

#include <cmath>
#include <random>

#include "freezing/finfree.hpp"
#include "oracles.hpp"

using namespace freezing;

namespace {

double max_diff(const RootTuple& a, const RootTuple& b) { return a.max_distance(b); }

} // namespace

TEST_CASE("boxplus examples") {
    const double r2 = std::sqrt(2.0);
    CHECK(max_diff(boxplus(RootTuple{-1.0, 1.0}, RootTuple{-1.0, 1.0}), RootTuple{-r2, r2}) < 1e-14);
    CHECK(max_diff(boxplus(RootTuple{1.0, 3.0}, RootTuple{2.0, 2.0}), RootTuple{3.0, 5.0}) < 1e-12);
    const RootTuple a{-2.0, 0.5, 1.0, 4.0};
    CHECK(max_diff(boxplus(a, RootTuple::zeros(4)), a) < 1e-12);
    CHECK_THROWS_AS(boxplus(a, RootTuple{1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("boxplus_coefficients match the factorial formula") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 10;
        const auto ea = elementary_symmetric(oracle::random_sorted(rng, n, -5.0, 5.0));
        const auto eb = elementary_symmetric(oracle::random_sorted(rng, n, -5.0, 5.0));
        const auto ec = boxplus_coefficients(ea, eb);
        const auto ref = oracle::boxplus_esp_direct(ea, eb);
        for (std::size_t k = 0; k <= n; ++k) {
            CHECK(std::abs(ec[k] - ref[k]) <= 1e-11 * std::max(1.0, std::abs(ref[k])));
        }
        // commutativity is exact
        CHECK(boxplus_coefficients(eb, ea) == ec);
    }
}

TEST_CASE("convolution_weight survives large N") {
    const double w = convolution_weight(160, 80, 80);
    CHECK(std::isfinite(w));
    CHECK(w > 0.0);
    CHECK(convolution_weight(5, 0, 3) == 1.0);
    // (N-i)!(N-j)!/(N!(N-k)!) with N=4, i=1, j=2: 3!2!/(4!1!) = 1/2
    CHECK(convolution_weight(4, 1, 2) == doctest::Approx(0.5));
}

TEST_CASE("boxplus shift equivariance and symmetry") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const RootTuple a(oracle::random_sorted(rng, n, -3.0, 3.0));
        const RootTuple b(oracle::random_sorted(rng, n, -3.0, 3.0));
        const RootTuple ab = boxplus(a, b);
        CHECK(ab == boxplus(b, a));
        CHECK(max_diff(boxplus(a.shifted(0.75), b), ab.shifted(0.75)) < 1e-10);
    }
}

TEST_CASE("fff operators") {
    const FFFOperator op = fff(MonicPolynomial({1.0, 0.0, -1.0}));
    CHECK(op.coeffs() == std::vector<double>{1.0, 0.0, -0.5});

    const FFFOperator lin = fff(MonicPolynomial({1.0, 2.5}));
    CHECK(lin.coeff(1) == doctest::Approx(-2.5));

    const double s = 1.5;
    const FFFOperator shift = fff(MonicPolynomial::from_roots(RootTuple::constant(5, s)));
    double fact = 1.0;
    for (std::size_t k = 0; k <= 5; ++k) {
        if (k > 0) {
            fact *= static_cast<double>(k);
        }
        CHECK(shift.coeff(k) == doctest::Approx(std::pow(-s, static_cast<double>(k)) / fact).epsilon(1e-13));
    }

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 9;
        const auto x = oracle::random_sorted(rng, n, -2.0, 2.0);
        const MonicPolynomial p = MonicPolynomial::from_roots(RootTuple(x));
        const auto applied = oracle::apply_operator_to_monomial(fff(p).coeffs());
        const auto ref = oracle::expand_roots(x);
        for (std::size_t m = 0; m <= n; ++m) {
            CHECK(std::abs(applied[m] - ref[m]) <= 1e-12 * std::max(1.0, std::abs(ref[m])));
        }
        const auto round = fff(p).apply_to_monomial();
        for (std::size_t k = 0; k <= n; ++k) {
            CHECK(std::abs(round.alpha(k) - p.alpha(k)) <= 1e-12 * std::max(1.0, std::abs(p.alpha(k))));
        }
    }
}

TEST_CASE("fff product agrees with boxplus") {
    const double r2 = std::sqrt(2.0);
    CHECK(max_diff(fff_product_convolution(RootTuple{-1.0, 1.0}, RootTuple{-1.0, 1.0}), RootTuple{-r2, r2}) < 1e-14);
    CHECK(max_diff(fff_product_convolution(hermite_roots(3), hermite_roots(3)), hermite_roots(3, 2.0)) < 1e-12);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 10;
        const RootTuple a(oracle::random_sorted(rng, n, -5.0, 5.0));
        const RootTuple b(oracle::random_sorted(rng, n, -5.0, 5.0));
        CHECK(max_diff(fff_product_convolution(a, b), boxplus(a, b)) < 1e-9);
        const RootTuple sep(oracle::random_sorted(rng, n, -5.0, 5.0, 0.1));
        CHECK(max_diff(fff_product_convolution(sep, RootTuple::zeros(n)), sep) < 1e-9);
    }
}

TEST_CASE("hermite and laguerre roots") {
    CHECK(max_diff(hermite_roots(2), RootTuple{-1.0, 1.0}) < 1e-15);
    const RootTuple h3 = hermite_roots(3);
    CHECK(h3[1] == 0.0);
    CHECK(max_diff(h3, RootTuple{-std::sqrt(3.0), 0.0, std::sqrt(3.0)}) < 1e-15);
    CHECK(hermite_roots(3, 0.0) == RootTuple::zeros(3));
    CHECK(max_diff(laguerre_roots(1, 2.5), RootTuple{2.5}) < 1e-15);
    CHECK(max_diff(laguerre_roots(2, 1.0), RootTuple{2.0 - std::sqrt(2.0), 2.0 + std::sqrt(2.0)}) < 1e-14);
    CHECK(max_diff(laguerre_roots(2, 3.0), RootTuple{2.0, 6.0}) < 1e-14);
    CHECK_THROWS_AS(laguerre_roots(3, 0.0), InvalidParameter);
    CHECK_THROWS_AS(laguerre_roots(3, -1.0), InvalidParameter);

    // Zeros of the recurrence-built polynomials from an independent route.
    for (std::size_t n = 1; n <= 8; ++n) {
        // H_{k+1} = x H_k - k H_{k-1}, coefficients ascending
        std::vector<double> hm{1.0}, h{0.0, 1.0};
        for (std::size_t k = 1; k < n; ++k) {
            std::vector<double> next(k + 2, 0.0);
            for (std::size_t m = 0; m < h.size(); ++m) {
                next[m + 1] += h[m];
            }
            for (std::size_t m = 0; m < hm.size(); ++m) {
                next[m] -= static_cast<double>(k) * hm[m];
            }
            hm = h;
            h = next;
        }
        const RootTuple z = hermite_roots(n);
        for (double v : z) {
            double val = 0.0;
            for (std::size_t m = h.size(); m-- > 0;) {
                val = val * v + h[m];
            }
            CHECK(std::abs(val) < 1e-9 * std::pow(1.0 + std::abs(v), static_cast<double>(n)));
        }
    }
}

TEST_CASE("Hermite semigroup and Laguerre convolution identities") {
    for (std::size_t n = 1; n <= 12; ++n) {
        for (double t : {0.25, 1.0, 4.0}) {
            for (double s : {0.25, 1.0, 4.0}) {
                CHECK(max_diff(boxplus(hermite_roots(n, t), hermite_roots(n, s)), hermite_roots(n, t + s)) < 1e-9);
            }
        }
    }
    for (std::size_t n = 1; n <= 10; ++n) {
        for (double a1 : {0.5, 1.0, 2.5}) {
            for (double a2 : {0.5, 1.0, 2.5}) {
                const RootTuple lhs = boxplus(laguerre_roots(n, a1), laguerre_roots(n, a2));
                const RootTuple rhs = laguerre_roots(n, static_cast<double>(n) + a1 + a2 - 1.0);
                CHECK(max_diff(lhs, rhs) < 1e-8);
            }
        }
    }
}

TEST_CASE("Markov-Krein lift") {
    const MKLift zero = markov_krein_lift(RootTuple::zeros(4));
    for (auto v : zero.s) {
        CHECK(std::abs(v) < 1e-12);
    }
    const MKLift c = markov_krein_lift(RootTuple::constant(3, 1.25));
    for (auto v : c.s) {
        CHECK(std::abs(v - 1.25) < 1e-9);
    }
    const MKLift pm = markov_krein_lift(RootTuple{-1.0, 1.0});
    REQUIRE(pm.n() == 2);
    std::vector<double> im{pm.s[0].imag(), pm.s[1].imag()};
    std::sort(im.begin(), im.end());
    CHECK(std::abs(pm.s[0].real()) < 1e-12);
    CHECK(im[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(im[1] == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(max_diff(markov_krein_project(MKLift{{{0.0, -1.0}, {0.0, 1.0}}}), RootTuple{-1.0, 1.0}) < 1e-12);
    CHECK(markov_krein_project(MKLift{{0.0, 0.0, 0.0}}) == RootTuple::zeros(3));

    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const RootTuple a(oracle::random_sorted(rng, n, -3.0, 3.0));
        const MKLift lift = markov_krein_lift(a);
        // binom(N,k) * mean(s^k) = e_k(a)
        const auto e = elementary_symmetric(a);
        double binom = 1.0;
        for (std::size_t k = 1; k <= n; ++k) {
            binom = binom * static_cast<double>(n - k + 1) / static_cast<double>(k);
            std::complex<double> mean = 0.0;
            for (auto v : lift.s) {
                mean += std::pow(v, static_cast<int>(k));
            }
            mean /= static_cast<double>(n);
            CHECK(std::abs(binom * mean - e[k]) < 1e-7 * std::max(1.0, std::abs(e[k])));
        }
        CHECK(max_diff(markov_krein_project(lift), a) < 1e-6);
    }
}
