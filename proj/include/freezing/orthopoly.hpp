#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "freezing/elemsym.hpp"

namespace freezing {

/// Dense real polynomial, coefficients in ascending powers.
struct Polynomial {
    std::vector<double> coeffs;

    double operator()(double x) const;
    std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    Polynomial derivative() const;
    /// Antiderivative with zero constant term.
    Polynomial primitive() const;
};

/// Symmetric tridiagonal matrix with diagonal a_1..a_N and strictly positive
/// off-diagonal b_1..b_{N-1}.
class JacobiMatrix {
public:
    JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag);

    std::size_t size() const noexcept { return diag_.size(); }
    const std::vector<double>& diag() const noexcept { return diag_; }
    const std::vector<double>& offdiag() const noexcept { return offdiag_; }
    /// Infinity norm, used to scale eigenvalue tolerances.
    double norm() const;

    friend bool operator==(const JacobiMatrix&, const JacobiMatrix&) = default;

private:
    std::vector<double> diag_;
    std::vector<double> offdiag_;
};

struct SpectralMeasure {
    RootTuple atoms;
    std::vector<double> weights;
};

/// Monic orthogonal polynomials p_0..p_N of a Jacobi matrix, built from
/// p_{n+1} = (x - a_{n+1}) p_n - b_n^2 p_{n-1}, together with the squared
/// norms h_n = b_1^2 ... b_n^2 under the spectral measure.
class OrthogonalSystem {
public:
    explicit OrthogonalSystem(JacobiMatrix source);

    const JacobiMatrix& source() const noexcept { return source_; }
    std::size_t size() const noexcept { return source_.size(); }
    const std::vector<double>& squared_norms() const noexcept { return norms_; }
    /// p_n for 0 <= n <= N (p_N is the characteristic polynomial).
    const Polynomial& monic(std::size_t n) const;
    /// p_n / sqrt(h_n) for 0 <= n <= N-1.
    Polynomial orthonormal(std::size_t n) const;

private:
    JacobiMatrix source_;
    std::vector<double> norms_;
    std::vector<Polynomial> polys_;
};

JacobiMatrix hermite_jacobi(std::size_t n);
JacobiMatrix laguerre_jacobi(std::size_t n, double alpha);
/// B B^T with B the lower bidiagonal freezing limit of the Laguerre matrix
/// model: diagonal sqrt(alpha+N-1), ..., sqrt(alpha); subdiagonal
/// sqrt(N-1), ..., 1.
JacobiMatrix laguerre_freezing_matrix(std::size_t n, double alpha);
/// Reverses diagonal and off-diagonal.
JacobiMatrix dual(const JacobiMatrix& j);

/// Eigenvalues by Sturm-sequence bisection, ascending. Each is refined until
/// its bracket is below max(tol * ||J||, 2 eps |lambda|).
RootTuple eigen_tridiag(const JacobiMatrix& j, std::optional<double> tol = std::nullopt);

/// det(x - J) from the three-term recurrence.
MonicPolynomial characteristic_polynomial(const JacobiMatrix& j);

/// Atoms are the eigenvalues; w_i = 1 / sum_j ptilde_j(lambda_i)^2.
SpectralMeasure spectral_measure(const JacobiMatrix& j, std::optional<double> tol = std::nullopt);
/// w_i = h_{N-1} / (p_{N-1}(lambda_i) p_N'(lambda_i)).
std::vector<double> christoffel_darboux_weights(const JacobiMatrix& j, const RootTuple& atoms);

OrthogonalSystem dual_hermite_system(std::size_t n);
OrthogonalSystem dual_laguerre_system(std::size_t n, double alpha);

/// Antiderivative (zero constant term) of q_n, or of q_n / sqrt(<q_n,q_n>).
Polynomial primitive(const OrthogonalSystem& sys, std::size_t n, bool orthonormal = false);
/// t^{(n+1)/2} Q_n(x / sqrt(t)).
double scaled_primitive(const OrthogonalSystem& sys, std::size_t n, double t, double x, bool orthonormal = false);

} // namespace freezing
