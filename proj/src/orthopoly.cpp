#include "freezing/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace freezing {

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs.size() <= 1) {
        return Polynomial{{0.0}};
    }
    std::vector<double> d(coeffs.size() - 1);
    for (std::size_t m = 1; m < coeffs.size(); ++m) {
        d[m - 1] = static_cast<double>(m) * coeffs[m];
    }
    return Polynomial{std::move(d)};
}

Polynomial Polynomial::primitive() const {
    std::vector<double> p(coeffs.size() + 1, 0.0);
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        p[m + 1] = coeffs[m] / static_cast<double>(m + 1);
    }
    return Polynomial{std::move(p)};
}

JacobiMatrix::JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
    if (diag_.empty()) {
        throw InvalidParameter("Jacobi matrix must be at least 1x1");
    }
    if (offdiag_.size() + 1 != diag_.size()) {
        throw DimensionMismatch("Jacobi matrix needs N-1 off-diagonal entries");
    }
    for (double b : offdiag_) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw InvalidParameter("Jacobi matrix off-diagonal entries must be positive");
        }
    }
    for (double a : diag_) {
        if (!std::isfinite(a)) {
            throw InvalidParameter("Jacobi matrix diagonal entries must be finite");
        }
    }
}

double JacobiMatrix::norm() const {
    double m = 0.0;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(diag_[i]);
        if (i > 0) {
            row += offdiag_[i - 1];
        }
        if (i + 1 < n) {
            row += offdiag_[i];
        }
        m = std::max(m, row);
    }
    return m;
}

JacobiMatrix hermite_jacobi(std::size_t n) {
    if (n < 1) {
        throw InvalidParameter("hermite_jacobi requires n >= 1");
    }
    std::vector<double> off(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        off[i] = std::sqrt(static_cast<double>(i + 1));
    }
    return JacobiMatrix(std::vector<double>(n, 0.0), std::move(off));
}

JacobiMatrix laguerre_jacobi(std::size_t n, double alpha) {
    if (n < 1) {
        throw InvalidParameter("laguerre_jacobi requires n >= 1");
    }
    if (!(alpha > 0.0)) {
        throw InvalidParameter("laguerre_jacobi requires alpha > 0");
    }
    std::vector<double> diag(n);
    std::vector<double> off(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = alpha + 2.0 * static_cast<double>(i);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double m = static_cast<double>(i + 1);
        off[i] = std::sqrt(m) * std::sqrt(alpha + m - 1.0);
    }
    return JacobiMatrix(std::move(diag), std::move(off));
}

JacobiMatrix laguerre_freezing_matrix(std::size_t n, double alpha) {
    if (n < 1) {
        throw InvalidParameter("laguerre_freezing_matrix requires n >= 1");
    }
    if (!(alpha > 0.0)) {
        throw InvalidParameter("laguerre_freezing_matrix requires alpha > 0");
    }
    const double nn = static_cast<double>(n);
    // B: d_i = sqrt(alpha + N - i), s_i = sqrt(N - i) below the diagonal.
    std::vector<double> d(n);
    std::vector<double> s(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = std::sqrt(alpha + nn - 1.0 - static_cast<double>(i));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        s[i] = std::sqrt(nn - 1.0 - static_cast<double>(i));
    }
    std::vector<double> diag(n);
    std::vector<double> off(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = d[i] * d[i] + (i > 0 ? s[i - 1] * s[i - 1] : 0.0);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        off[i] = d[i] * s[i];
    }
    return JacobiMatrix(std::move(diag), std::move(off));
}

JacobiMatrix dual(const JacobiMatrix& j) {
    std::vector<double> diag(j.diag().rbegin(), j.diag().rend());
    std::vector<double> off(j.offdiag().rbegin(), j.offdiag().rend());
    return JacobiMatrix(std::move(diag), std::move(off));
}

namespace {

// Number of eigenvalues strictly below x (LDL^T inertia count).
std::size_t count_below(const JacobiMatrix& j, double x) {
    const auto& a = j.diag();
    const auto& b = j.offdiag();
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    std::size_t count = 0;
    double d = a[0] - x;
    for (std::size_t i = 0;; ++i) {
        if (d == 0.0) {
            d = -tiny;
        }
        if (d < 0.0) {
            ++count;
        }
        if (i + 1 == a.size()) {
            break;
        }
        d = (a[i + 1] - x) - b[i] * b[i] / d;
    }
    return count;
}

// det(x - J) and its derivative by the recurrence, rescaled to avoid overflow;
// only the ratio is used.
std::pair<double, double> char_value_and_slope(const JacobiMatrix& j, double x) {
    const auto& a = j.diag();
    const auto& b = j.offdiag();
    double p_prev = 0.0, p = 1.0, d_prev = 0.0, d = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
        const double b2 = m > 0 ? b[m - 1] * b[m - 1] : 0.0;
        const double p_next = (x - a[m]) * p - b2 * p_prev;
        const double d_next = p + (x - a[m]) * d - b2 * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        const double big = std::max(std::abs(p), std::abs(d));
        if (big > 1e100) {
            p /= big;
            p_prev /= big;
            d /= big;
            d_prev /= big;
        }
    }
    return {p, d};
}

// A few guarded Newton steps on the bisection midpoint: a step is kept only
// when it stays within `radius` and does not increase |p|.
double polish(const JacobiMatrix& j, double x, double radius) {
    const double start = x;
    for (int it = 0; it < 3; ++it) {
        const auto [p, d] = char_value_and_slope(j, x);
        if (p == 0.0 || d == 0.0 || !std::isfinite(p / d)) {
            break;
        }
        const double next = x - p / d;
        if (std::abs(next - start) > radius || std::abs(char_value_and_slope(j, next).first) > std::abs(p)) {
            break;
        }
        if (next == x) {
            break;
        }
        x = next;
    }
    return x;
}

} // namespace

RootTuple eigen_tridiag(const JacobiMatrix& j, std::optional<double> tol) {
    const std::size_t n = j.size();
    const double norm = j.norm();
    const double abs_tol = tol.value_or(std::numeric_limits<double>::epsilon()) * std::max(norm, 1e-300);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) {
            r += j.offdiag()[i - 1];
        }
        if (i + 1 < n) {
            r += j.offdiag()[i];
        }
        lo = std::min(lo, j.diag()[i] - r);
        hi = std::max(hi, j.diag()[i] + r);
    }
    const double pad = 4.0 * std::numeric_limits<double>::epsilon() * std::max(norm, 1.0);
    lo -= pad;
    hi += pad;

    std::vector<double> ev(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k-th eigenvalue: smallest x with count_below(x) > k.
        double l = (k > 0) ? std::max(lo, ev[k - 1] - pad) : lo;
        double h = hi;
        for (int iter = 0; iter < 4000; ++iter) {
            const double mid = l + 0.5 * (h - l);
            if (mid <= l || mid >= h) {
                break;
            }
            if (h - l <= std::max(abs_tol, 2.0 * std::numeric_limits<double>::epsilon() * std::abs(mid))) {
                break;
            }
            if (count_below(j, mid) > k) {
                h = mid;
            } else {
                l = mid;
            }
        }
        ev[k] = polish(j, l + 0.5 * (h - l), std::max(abs_tol, h - l));
    }
    return RootTuple(std::move(ev));
}

OrthogonalSystem::OrthogonalSystem(JacobiMatrix source) : source_(std::move(source)) {
    const std::size_t n = source_.size();
    const auto& a = source_.diag();
    const auto& b = source_.offdiag();
    polys_.reserve(n + 1);
    polys_.push_back(Polynomial{{1.0}});
    polys_.push_back(Polynomial{{-a[0], 1.0}});
    for (std::size_t m = 1; m < n; ++m) {
        // p_{m+1} = (x - a_{m+1}) p_m - b_m^2 p_{m-1}
        const auto& pm = polys_[m].coeffs;
        const auto& pprev = polys_[m - 1].coeffs;
        std::vector<double> next(m + 2, 0.0);
        for (std::size_t c = 0; c < pm.size(); ++c) {
            next[c + 1] += pm[c];
            next[c] -= a[m] * pm[c];
        }
        for (std::size_t c = 0; c < pprev.size(); ++c) {
            next[c] -= b[m - 1] * b[m - 1] * pprev[c];
        }
        polys_.push_back(Polynomial{std::move(next)});
    }
    norms_.assign(n, 1.0);
    for (std::size_t m = 1; m < n; ++m) {
        norms_[m] = norms_[m - 1] * b[m - 1] * b[m - 1];
    }
}

const Polynomial& OrthogonalSystem::monic(std::size_t n) const {
    if (n >= polys_.size()) {
        throw IndexOutOfRange("orthogonal polynomial index out of range");
    }
    return polys_[n];
}

Polynomial OrthogonalSystem::orthonormal(std::size_t n) const {
    if (n >= size()) {
        throw IndexOutOfRange("orthonormal polynomial index out of range");
    }
    Polynomial p = polys_[n];
    const double s = 1.0 / std::sqrt(norms_[n]);
    for (double& c : p.coeffs) {
        c *= s;
    }
    return p;
}

MonicPolynomial characteristic_polynomial(const JacobiMatrix& j) {
    const OrthogonalSystem sys(j);
    const std::size_t n = j.size();
    const auto& c = sys.monic(n).coeffs;
    std::vector<double> alpha(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        alpha[k] = (k % 2 == 0) ? c[n - k] : -c[n - k];
    }
    alpha[0] = 1.0;
    return MonicPolynomial(std::move(alpha));
}

SpectralMeasure spectral_measure(const JacobiMatrix& j, std::optional<double> tol) {
    const std::size_t n = j.size();
    const auto& a = j.diag();
    const auto& b = j.offdiag();
    SpectralMeasure mu{eigen_tridiag(j, tol), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double x = mu.atoms[i];
        // Orthonormal recurrence b_{m+1} pt_{m+1} = (x - a_{m+1}) pt_m - b_m pt_{m-1};
        // values are stored divided by `scale`.
        double prev = 0.0;
        double cur = 1.0;
        double sum = 1.0;
        double log_scale = 0.0;
        for (std::size_t m = 0; m + 1 < n; ++m) {
            const double bm = (m > 0) ? b[m - 1] : 0.0;
            const double next = ((x - a[m]) * cur - bm * prev) / b[m];
            prev = cur;
            cur = next;
            sum += cur * cur;
            if ((m + 1) % 10 == 0 && std::abs(cur) > 1e100) {
                const double f = std::abs(cur);
                prev /= f;
                cur /= f;
                sum /= f * f;
                log_scale += std::log(f);
            }
        }
        mu.weights[i] = std::exp(-2.0 * log_scale) / sum;
    }
    return mu;
}

std::vector<double> christoffel_darboux_weights(const JacobiMatrix& j, const RootTuple& atoms) {
    const std::size_t n = j.size();
    if (atoms.size() != n) {
        throw DimensionMismatch();
    }
    // p_{N-1}(x) is nearly zero at atoms with a small last eigenvector component, so the
    // formula is evaluated in quad precision at the atom refined to a quad-precision eigenvalue.
    __extension__ using wide = __float128;
    const auto& a = j.diag();
    const auto& b = j.offdiag();
    wide h = 1;
    for (double v : b) {
        h *= static_cast<wide>(v) * v;
    }
    // p_{N-1}, p_N and p_N' at x by the recurrence, differentiated term by term.
    auto eval = [&](wide x, wide& p_prev, wide& p, wide& d) {
        p_prev = 0;
        p = 1;
        wide d_prev = 0;
        d = 0;
        for (std::size_t m = 0; m < n; ++m) {
            const wide b2 = m > 0 ? static_cast<wide>(b[m - 1]) * b[m - 1] : 0;
            const wide p_next = (x - a[m]) * p - b2 * p_prev;
            const wide d_next = p + (x - a[m]) * d - b2 * d_prev;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
        }
    };
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double radius = 1e-8 * std::max(1.0, std::abs(atoms[i]));
        wide x = atoms[i];
        wide p_prev, p, d;
        for (int it = 0; it < 8; ++it) {
            eval(x, p_prev, p, d);
            if (p == 0 || d == 0) {
                break;
            }
            const wide next = x - p / d;
            const double moved = static_cast<double>(next - atoms[i]);
            if (!(std::abs(moved) <= radius) || next == x) {
                break;
            }
            x = next;
        }
        eval(x, p_prev, p, d);
        w[i] = static_cast<double>(h / (p_prev * d));
    }
    return w;
}

OrthogonalSystem dual_hermite_system(std::size_t n) { return OrthogonalSystem(dual(hermite_jacobi(n))); }

OrthogonalSystem dual_laguerre_system(std::size_t n, double alpha) {
    return OrthogonalSystem(dual(laguerre_jacobi(n, alpha)));
}

Polynomial primitive(const OrthogonalSystem& sys, std::size_t n, bool orthonormal) {
    if (n >= sys.size()) {
        throw IndexOutOfRange("primitive: index must satisfy 0 <= n <= N-1");
    }
    return (orthonormal ? sys.orthonormal(n) : sys.monic(n)).primitive();
}

double scaled_primitive(const OrthogonalSystem& sys, std::size_t n, double t, double x, bool orthonormal) {
    if (!(t > 0.0)) {
        throw InvalidParameter("scaled_primitive requires t > 0");
    }
    // sum_m c_m x^m t^{(n+1-m)/2}: a polynomial in (t, x) when q_n has parity n.
    const Polynomial q = primitive(sys, n, orthonormal);
    const double rt = std::sqrt(t);
    double acc = 0.0;
    double xm = 1.0;
    for (std::size_t m = 0; m < q.coeffs.size(); ++m) {
        if (q.coeffs[m] != 0.0) {
            const int e = static_cast<int>(n + 1) - static_cast<int>(m);
            const double tp = (e % 2 == 0) ? std::pow(t, e / 2) : std::pow(rt, e);
            acc += q.coeffs[m] * xm * tp;
        }
        xm *= x;
    }
    return acc;
}

} // namespace freezing
