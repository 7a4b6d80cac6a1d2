#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "freezing/elemsym.hpp"

namespace freezing {

/// Finite free Fourier transform: the differential operator sum_k c_k D^k
/// (truncated at order N) that maps x^N to the source polynomial.
class FFFOperator {
public:
    explicit FFFOperator(std::vector<double> coeffs);

    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    double coeff(std::size_t k) const { return coeffs_.at(k); }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }

    /// Product of two operators truncated at order N (the "=_N" equality).
    FFFOperator operator*(const FFFOperator& other) const;
    /// Applies the operator to x^N and returns the resulting monic polynomial.
    MonicPolynomial apply_to_monomial() const;

private:
    std::vector<double> coeffs_;
};

/// Complex s_1..s_N with (1/N) sum_i (z - s_i)^N = prod_i (z - a_i).
/// Treated as an unordered multiset.
struct MKLift {
    std::vector<std::complex<double>> s;
    std::size_t n() const noexcept { return s.size(); }
};

/// Weight (N-i)!(N-j)! / (N!(N-k)!) with k = i + j, as a product of i ratios.
double convolution_weight(std::size_t n, std::size_t i, std::size_t j);

/// Elementary symmetric values of a boxplus_N b, computed from e_k(a), e_k(b).
std::vector<double> boxplus_coefficients(const std::vector<double>& ea, const std::vector<double>& eb);

/// Finite free convolution of two N-tuples.
RootTuple boxplus(const RootTuple& a, const RootTuple& b, std::optional<double> tol = std::nullopt);

FFFOperator fff(const MonicPolynomial& p);
RootTuple fff_product_convolution(const RootTuple& a, const RootTuple& b);

/// sqrt(t) times the zeros of the probabilists' Hermite polynomial H_n.
RootTuple hermite_roots(std::size_t n, double t = 1.0);
/// t times the zeros of the monic Laguerre polynomial L_n^{(alpha)}
/// (orthogonal for x^{alpha-1} e^{-x}).
RootTuple laguerre_roots(std::size_t n, double alpha, double t = 1.0);

struct LiftOptions {
    std::optional<double> tol;
    int max_restarts = 5;
    int max_iterations = 500;
    std::uint64_t seed = 0x5eedf00dULL;
};

MKLift markov_krein_lift(const RootTuple& a, const LiftOptions& options = {});
RootTuple markov_krein_project(const MKLift& lift, std::optional<double> tol = std::nullopt);

/// Simultaneous (Durand-Kerner / Weierstrass) iteration for all complex roots
/// of the monic polynomial with the given coefficients in descending powers
/// (coeffs[0] == 1). Restarts from perturbed starting points on failure.
std::vector<std::complex<double>> durand_kerner(const std::vector<std::complex<double>>& coeffs, double tol,
                                                int max_restarts, int max_iterations, std::uint64_t seed);

} // namespace freezing
