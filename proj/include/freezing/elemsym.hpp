#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "freezing/error.hpp"

namespace freezing {

/// N real numbers kept in ascending order. Construction sorts its input, so
/// every RootTuple in the library is ordered regardless of where it came from.
class RootTuple {
public:
    RootTuple() = default;
    explicit RootTuple(std::vector<double> values);
    RootTuple(std::initializer_list<double> values) : RootTuple(std::vector<double>(values)) {}

    static RootTuple zeros(std::size_t n);
    static RootTuple constant(std::size_t n, double value);

    std::size_t size() const noexcept { return roots_.size(); }
    bool empty() const noexcept { return roots_.empty(); }
    double operator[](std::size_t i) const { return roots_[i]; }
    std::span<const double> values() const noexcept { return roots_; }
    const std::vector<double>& vector() const noexcept { return roots_; }
    auto begin() const noexcept { return roots_.begin(); }
    auto end() const noexcept { return roots_.end(); }

    RootTuple scaled(double factor) const;
    RootTuple shifted(double offset) const;

    /// Largest absolute coordinate difference; throws DimensionMismatch.
    double max_distance(const RootTuple& other) const;

    friend bool operator==(const RootTuple&, const RootTuple&) = default;

private:
    std::vector<double> roots_;
};

/// Monic degree-N polynomial sum_k (-1)^k alpha_k x^{N-k}, stored through the
/// signed elementary symmetric values alpha_0 = 1, alpha_1, ..., alpha_N.
class MonicPolynomial {
public:
    explicit MonicPolynomial(std::vector<double> alpha);
    static MonicPolynomial from_roots(const RootTuple& roots);

    std::size_t degree() const noexcept { return alpha_.size() - 1; }
    double alpha(std::size_t k) const { return alpha_.at(k); }
    const std::vector<double>& alphas() const noexcept { return alpha_; }

    double operator()(double x) const;
    /// Horner rounding-error bound for the value at x.
    double evaluation_error_bound(double x) const;
    /// p'(x) / N, which is again monic.
    MonicPolynomial normalized_derivative() const;
    /// Dense coefficients in ascending powers of x.
    std::vector<double> monomial_coefficients() const;
    /// Bound on |root| (Fujiwara).
    double root_bound() const;

private:
    std::vector<double> alpha_;
};

/// (e_0, ..., e_N) of x, multiplying out prod(1 + x_i s) one factor at a time.
std::vector<double> elementary_symmetric(std::span<const double> x);
inline std::vector<double> elementary_symmetric(const RootTuple& x) { return elementary_symmetric(x.values()); }

/// d e_k / d x_i, i.e. e_{k-1} of x with the i-th entry removed.
/// `i` is zero-based, 1 <= k <= N.
double partial_esp(std::size_t i, std::size_t k, std::span<const double> x);

/// Default zero-detection tolerance, 1e-12 * max(1, max_k |alpha_k|).
double default_root_tolerance(const MonicPolynomial& p);

/// All real roots of a real-rooted polynomial, ascending, with multiplicity.
/// Roots of p' (found recursively) bracket the roots of p; each bracket is
/// bisected to full precision. A critical value with |p| <= max(tol, rounding
/// bound) is a multiple root. Throws NotRealRooted when a critical value has
/// the wrong sign beyond that threshold.
RootTuple roots_of_monic(const MonicPolynomial& p, std::optional<double> tol = std::nullopt);

/// Newton's identities k e_k = sum_{j=1..k} (-1)^{j-1} e_{k-j} p_j.
/// `power_sums` holds p_1..p_n; returns e_0..e_n.
template <class T>
std::vector<T> newton_esp_from_power_sums(std::span<const T> power_sums, std::size_t n) {
    if (power_sums.size() < n) {
        throw DimensionMismatch("need p_1..p_n for Newton's identities");
    }
    std::vector<T> e(n + 1, T(0));
    e[0] = T(1);
    for (std::size_t k = 1; k <= n; ++k) {
        T acc(0);
        for (std::size_t j = 1; j <= k; ++j) {
            const T term = e[k - j] * power_sums[j - 1];
            if (j % 2 == 1) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e[k] = acc / static_cast<double>(k);
    }
    return e;
}

} // namespace freezing
