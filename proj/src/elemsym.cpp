#include "freezing/elemsym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace freezing {

RootTuple::RootTuple(std::vector<double> values) : roots_(std::move(values)) {
    if (roots_.empty()) {
        throw InvalidParameter("root tuple must have at least one entry");
    }
    for (double v : roots_) {
        if (!std::isfinite(v)) {
            throw InvalidParameter("root tuple entries must be finite");
        }
    }
    std::sort(roots_.begin(), roots_.end());
}

RootTuple RootTuple::zeros(std::size_t n) { return constant(n, 0.0); }

RootTuple RootTuple::constant(std::size_t n, double value) {
    return RootTuple(std::vector<double>(n, value));
}

RootTuple RootTuple::scaled(double factor) const {
    std::vector<double> out(roots_);
    for (double& v : out) {
        v *= factor;
    }
    return RootTuple(std::move(out));
}

RootTuple RootTuple::shifted(double offset) const {
    std::vector<double> out(roots_);
    for (double& v : out) {
        v += offset;
    }
    return RootTuple(std::move(out));
}

double RootTuple::max_distance(const RootTuple& other) const {
    if (other.size() != size()) {
        throw DimensionMismatch();
    }
    double d = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        d = std::max(d, std::abs(roots_[i] - other.roots_[i]));
    }
    return d;
}

MonicPolynomial::MonicPolynomial(std::vector<double> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.size() < 2) {
        throw InvalidParameter("monic polynomial must have degree >= 1");
    }
    if (alpha_[0] != 1.0) {
        throw InvalidParameter("monic polynomial requires alpha_0 = 1");
    }
}

MonicPolynomial MonicPolynomial::from_roots(const RootTuple& roots) {
    return MonicPolynomial(elementary_symmetric(roots));
}

double MonicPolynomial::operator()(double x) const {
    double acc = 1.0;
    for (std::size_t k = 1; k < alpha_.size(); ++k) {
        acc = acc * x + ((k % 2 == 0) ? alpha_[k] : -alpha_[k]);
    }
    return acc;
}

double MonicPolynomial::evaluation_error_bound(double x) const {
    const double ax = std::abs(x);
    double acc = 1.0;
    for (std::size_t k = 1; k < alpha_.size(); ++k) {
        acc = acc * ax + std::abs(alpha_[k]);
    }
    const double n = static_cast<double>(degree());
    return (2.0 * n + 4.0) * std::numeric_limits<double>::epsilon() * acc;
}

MonicPolynomial MonicPolynomial::normalized_derivative() const {
    const std::size_t n = degree();
    std::vector<double> d(n);
    d[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        d[k] = alpha_[k] * static_cast<double>(n - k) / static_cast<double>(n);
    }
    return MonicPolynomial(std::move(d));
}

std::vector<double> MonicPolynomial::monomial_coefficients() const {
    const std::size_t n = degree();
    std::vector<double> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        c[n - k] = (k % 2 == 0) ? alpha_[k] : -alpha_[k];
    }
    return c;
}

double MonicPolynomial::root_bound() const {
    double b = 0.0;
    for (std::size_t k = 1; k < alpha_.size(); ++k) {
        const double a = std::abs(alpha_[k]);
        if (a > 0.0) {
            b = std::max(b, std::pow(a, 1.0 / static_cast<double>(k)));
        }
    }
    return 2.0 * b;
}

std::vector<double> elementary_symmetric(std::span<const double> x) {
    std::vector<double> e(x.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t k = i + 1; k >= 1; --k) {
            e[k] += x[i] * e[k - 1];
        }
    }
    return e;
}

double partial_esp(std::size_t i, std::size_t k, std::span<const double> x) {
    const std::size_t n = x.size();
    if (i >= n) {
        throw IndexOutOfRange("partial_esp: variable index out of range");
    }
    if (k < 1 || k > n) {
        throw IndexOutOfRange("partial_esp: order out of range");
    }
    std::vector<double> rest;
    rest.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) {
            rest.push_back(x[j]);
        }
    }
    return elementary_symmetric(rest)[k - 1];
}

double default_root_tolerance(const MonicPolynomial& p) {
    double m = 1.0;
    for (double a : p.alphas()) {
        m = std::max(m, std::abs(a));
    }
    return 1e-12 * m;
}

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Bisect p on [lo, hi] where p(lo) and p(hi) have opposite strict signs.
double bisect(const MonicPolynomial& p, double lo, double hi, int sign_lo) {
    for (int iter = 0; iter < 2200; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double v = p(mid);
        if (v == 0.0) {
            return mid;
        }
        if (sign_of(v) == sign_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

std::vector<double> solve_recursive(const MonicPolynomial& p, double tol) {
    const std::size_t n = p.degree();
    if (n == 1) {
        return {p.alpha(1)};
    }
    const std::vector<double> crit = solve_recursive(p.normalized_derivative(), tol);

    // Enclose every root strictly.
    double bound = std::max(p.root_bound(), 1.0);
    bound = std::max({bound, std::abs(crit.front()), std::abs(crit.back())});
    bound = 2.0 * bound + 1.0;

    // Endpoints: -bound, crit[0..n-2], +bound. Expected sign of p at the
    // j-th endpoint (j = 0..n) is (-1)^(n-j) for a real-rooted monic p.
    std::vector<double> at(n + 1);
    std::vector<double> val(n + 1);
    std::vector<bool> zero(n + 1, false);
    at[0] = -bound;
    at[n] = bound;
    for (std::size_t j = 1; j < n; ++j) {
        at[j] = crit[j - 1];
    }
    for (std::size_t j = 0; j <= n; ++j) {
        val[j] = p(at[j]);
        const int expected = ((n - j) % 2 == 0) ? 1 : -1;
        const double threshold = std::max(tol, p.evaluation_error_bound(at[j]));
        if (std::abs(val[j]) <= threshold) {
            zero[j] = (j != 0 && j != n);
            if (!zero[j]) {
                val[j] = expected * threshold;
            }
        } else if (sign_of(val[j]) != expected) {
            std::ostringstream msg;
            msg << "polynomial is not real-rooted: critical value " << val[j] << " at x = " << at[j]
                << " has the wrong sign";
            throw NotRealRooted(msg.str());
        }
    }

    std::vector<double> roots(n);
    for (std::size_t j = 0; j < n; ++j) {
        // Root j lies in [at[j], at[j+1]].
        if (zero[j]) {
            roots[j] = at[j];
        } else if (zero[j + 1]) {
            roots[j] = at[j + 1];
        } else {
            roots[j] = bisect(p, at[j], at[j + 1], sign_of(val[j]));
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace

RootTuple roots_of_monic(const MonicPolynomial& p, std::optional<double> tol) {
    for (double a : p.alphas()) {
        if (!std::isfinite(a)) {
            throw InvalidParameter("polynomial coefficients must be finite");
        }
    }
    const double t = tol.value_or(default_root_tolerance(p));
    return RootTuple(solve_recursive(p, t));
}

} // namespace freezing
