#include "freezing/finfree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "freezing/orthopoly.hpp"

namespace freezing {

FFFOperator::FFFOperator(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 2) {
        throw InvalidParameter("FFF operator must have order >= 1");
    }
}

FFFOperator FFFOperator::operator*(const FFFOperator& other) const {
    if (other.degree() != degree()) {
        throw DimensionMismatch();
    }
    const std::size_t n = degree();
    std::vector<double> r(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        // Pairwise symmetric accumulation keeps p*q == q*p bit for bit.
        double acc = 0.0;
        for (std::size_t i = 0; 2 * i <= k; ++i) {
            const std::size_t j = k - i;
            if (i == j) {
                acc += coeffs_[i] * other.coeffs_[j];
            } else {
                acc += coeffs_[i] * other.coeffs_[j] + coeffs_[j] * other.coeffs_[i];
            }
        }
        r[k] = acc;
    }
    return FFFOperator(std::move(r));
}

MonicPolynomial FFFOperator::apply_to_monomial() const {
    // D^k x^N = N!/(N-k)! x^{N-k}; the x^{N-k} coefficient is (-1)^k alpha_k.
    const std::size_t n = degree();
    std::vector<double> alpha(n + 1);
    double falling = 1.0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k > 0) {
            falling *= static_cast<double>(n - k + 1);
        }
        const double c = coeffs_[k] * falling;
        alpha[k] = (k % 2 == 0) ? c : -c;
    }
    alpha[0] = 1.0;
    if (coeffs_[0] != 1.0) {
        throw InvalidParameter("FFF operator does not describe a monic polynomial (c_0 != 1)");
    }
    return MonicPolynomial(std::move(alpha));
}

double convolution_weight(std::size_t n, std::size_t i, std::size_t j) {
    if (i + j > n) {
        throw IndexOutOfRange("convolution weight requires i + j <= N");
    }
    // (N-j)!/(N-k)! divided by N!/(N-i)!: i factors each way.
    double w = 1.0;
    for (std::size_t m = 0; m < i; ++m) {
        w *= static_cast<double>(n - j - m) / static_cast<double>(n - m);
    }
    return w;
}

std::vector<double> boxplus_coefficients(const std::vector<double>& ea, const std::vector<double>& eb) {
    if (ea.size() != eb.size()) {
        throw DimensionMismatch();
    }
    const std::size_t n = ea.size() - 1;
    std::vector<double> ec(n + 1, 0.0);
    ec[0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; 2 * i <= k; ++i) {
            const std::size_t j = k - i;
            const double w = convolution_weight(n, i, j);
            if (i == j) {
                acc += w * (ea[i] * eb[j]);
            } else {
                acc += w * (ea[i] * eb[j] + ea[j] * eb[i]);
            }
        }
        ec[k] = acc;
    }
    return ec;
}

RootTuple boxplus(const RootTuple& a, const RootTuple& b, std::optional<double> tol) {
    if (a.size() != b.size()) {
        throw DimensionMismatch();
    }
    const MonicPolynomial c(boxplus_coefficients(elementary_symmetric(a), elementary_symmetric(b)));
    try {
        return roots_of_monic(c, tol);
    } catch (const NotRealRooted& e) {
        throw NotRealRooted(std::string("internal error: convolution of real tuples lost real-rootedness: ") +
                            e.what());
    }
}

FFFOperator fff(const MonicPolynomial& p) {
    const std::size_t n = p.degree();
    std::vector<double> c(n + 1);
    double falling = 1.0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k > 0) {
            falling *= static_cast<double>(n - k + 1);
        }
        // (-1)^k alpha_k / (k! binom(N,k)) = (-1)^k alpha_k (N-k)!/N!
        const double v = p.alpha(k) / falling;
        c[k] = (k % 2 == 0) ? v : -v;
    }
    return FFFOperator(std::move(c));
}

RootTuple fff_product_convolution(const RootTuple& a, const RootTuple& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch();
    }
    const FFFOperator r = fff(MonicPolynomial::from_roots(a)) * fff(MonicPolynomial::from_roots(b));
    return roots_of_monic(r.apply_to_monomial());
}

RootTuple hermite_roots(std::size_t n, double t) {
    if (n < 1) {
        throw InvalidParameter("hermite_roots requires n >= 1");
    }
    if (!(t >= 0.0)) {
        throw InvalidParameter("hermite_roots requires t >= 0");
    }
    std::vector<double> z = eigen_tridiag(hermite_jacobi(n)).vector();
    // The zeros are symmetric about 0; enforce it exactly.
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double m = 0.5 * (z[n - 1 - i] - z[i]);
        z[i] = -m;
        z[n - 1 - i] = m;
    }
    if (n % 2 == 1) {
        z[n / 2] = 0.0;
    }
    const double s = std::sqrt(t);
    for (double& v : z) {
        v *= s;
    }
    return RootTuple(std::move(z));
}

RootTuple laguerre_roots(std::size_t n, double alpha, double t) {
    if (n < 1) {
        throw InvalidParameter("laguerre_roots requires n >= 1");
    }
    if (!(alpha > 0.0)) {
        throw InvalidParameter("laguerre_roots requires alpha > 0");
    }
    if (!(t >= 0.0)) {
        throw InvalidParameter("laguerre_roots requires t >= 0");
    }
    return eigen_tridiag(laguerre_jacobi(n, alpha)).scaled(t);
}

std::vector<std::complex<double>> durand_kerner(const std::vector<std::complex<double>>& coeffs, double tol,
                                                int max_restarts, int max_iterations, std::uint64_t seed) {
    using cd = std::complex<double>;
    const std::size_t n = coeffs.size() - 1;
    if (n == 0) {
        return {};
    }
    auto eval = [&](cd z) {
        cd acc = coeffs[0];
        for (std::size_t k = 1; k <= n; ++k) {
            acc = acc * z + coeffs[k];
        }
        return acc;
    };
    double radius = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        radius = std::max(radius, std::pow(std::abs(coeffs[k]), 1.0 / static_cast<double>(k)));
    }
    radius = std::max(radius, 1e-3);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const cd base(0.4, 0.9);
    for (int attempt = 0; attempt <= max_restarts; ++attempt) {
        std::vector<cd> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = radius * std::pow(base, static_cast<double>(i));
            if (attempt > 0) {
                z[i] *= cd(1.0 + 0.25 * unit(rng), 0.25 * unit(rng));
            }
        }
        for (int iter = 0; iter < max_iterations; ++iter) {
            double max_step = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < n; ++i) {
                cd denom(1.0, 0.0);
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) {
                        denom *= (z[i] - z[j]);
                    }
                }
                if (std::abs(denom) == 0.0) {
                    denom = cd(std::numeric_limits<double>::epsilon() * radius, 0.0);
                }
                const cd step = eval(z[i]) / denom;
                z[i] -= step;
                max_step = std::max(max_step, std::abs(step));
                finite = finite && std::isfinite(z[i].real()) && std::isfinite(z[i].imag());
            }
            if (!finite) {
                break;
            }
            if (max_step < tol) {
                return z;
            }
        }
    }
    throw NoConvergence("simultaneous complex root iteration did not converge");
}

namespace {

double binomial(std::size_t n, std::size_t k) {
    double b = 1.0;
    for (std::size_t m = 1; m <= k; ++m) {
        b = b * static_cast<double>(n - k + m) / static_cast<double>(m);
    }
    return b;
}

} // namespace

MKLift markov_krein_lift(const RootTuple& a, const LiftOptions& options) {
    const std::size_t n = a.size();
    double mean = 0.0;
    for (double v : a) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    const RootTuple centred = a.shifted(-mean);
    const std::vector<double> e = elementary_symmetric(centred);

    // binom(N,k) * (1/N) p_k(s) = e_k(a)
    std::vector<double> p(n);
    double scale = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        p[k - 1] = static_cast<double>(n) * e[k] / binomial(n, k);
        scale = std::max(scale, std::pow(std::abs(p[k - 1]) / static_cast<double>(n), 1.0 / static_cast<double>(k)));
    }
    const std::vector<double> es = newton_esp_from_power_sums<double>(p, n);

    MKLift lift;
    const double tol = options.tol.value_or(1e-14 * std::max(1.0, scale));
    bool all_zero = true;
    for (std::size_t k = 1; k <= n; ++k) {
        all_zero = all_zero && std::abs(es[k]) <= tol * std::pow(std::max(1.0, scale), static_cast<double>(k));
    }
    if (all_zero) {
        lift.s.assign(n, std::complex<double>(mean, 0.0));
        return lift;
    }
    std::vector<std::complex<double>> coeffs(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        coeffs[k] = (k % 2 == 0) ? es[k] : -es[k];
    }
    lift.s = durand_kerner(coeffs, tol, options.max_restarts, options.max_iterations, options.seed);
    for (auto& s : lift.s) {
        s += mean;
    }
    return lift;
}

RootTuple markov_krein_project(const MKLift& lift, std::optional<double> tol) {
    using cd = std::complex<double>;
    const std::size_t n = lift.n();
    if (n == 0) {
        throw InvalidParameter("empty Markov-Krein lift");
    }
    cd mean(0.0, 0.0);
    for (const cd& s : lift.s) {
        mean += s;
    }
    mean /= static_cast<double>(n);
    double scale = 1.0;
    for (const cd& s : lift.s) {
        scale = std::max(scale, std::abs(s - mean));
    }
    const double imag_tol = tol.value_or(1e-8 * scale);
    if (std::abs(mean.imag()) > imag_tol) {
        throw NotRealRooted("lift has a non-real mean");
    }

    std::vector<double> alpha(n + 1);
    alpha[0] = 1.0;
    std::vector<cd> powers(n, cd(1.0, 0.0));
    for (std::size_t k = 1; k <= n; ++k) {
        cd pk(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            powers[i] *= (lift.s[i] - mean);
            pk += powers[i];
        }
        const cd ek = binomial(n, k) * pk / static_cast<double>(n);
        if (std::abs(ek.imag()) > imag_tol * std::pow(scale, static_cast<double>(k))) {
            throw NotRealRooted("reconstructed coefficients are not real");
        }
        alpha[k] = ek.real();
    }
    return roots_of_monic(MonicPolynomial(std::move(alpha))).shifted(mean.real());
}

} // namespace freezing
