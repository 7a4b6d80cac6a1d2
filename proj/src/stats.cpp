#include "freezing/stats.hpp"

#include <algorithm>
#include <cmath>

#include "freezing/finfree.hpp"
#include "freezing/orthopoly.hpp"

namespace freezing {

bool within_budget(double estimate, double target, double se, double rel_tol) {
    return std::abs(estimate - target) <= std::max(3.0 * se, rel_tol * std::abs(target));
}

SampleCovariance sample_covariance(const Eigen::MatrixXd& x) {
    const Eigen::Index m = x.rows();
    const Eigen::Index d = x.cols();
    if (m < 2) {
        throw InvalidParameter("covariance needs at least two samples");
    }
    SampleCovariance out;
    out.mean = x.colwise().mean().transpose();
    const Eigen::MatrixXd c = x.rowwise() - out.mean.transpose();
    const double md = static_cast<double>(m);
    out.cov = (c.transpose() * c) / (md - 1.0);
    out.stderr_.resize(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = a; b < d; ++b) {
            const Eigen::ArrayXd prod = c.col(a).array() * c.col(b).array();
            const double biased = prod.mean();
            const double fourth = (prod * prod).mean();
            const double se = std::sqrt(std::max(fourth - biased * biased, 0.0) / md);
            out.stderr_(a, b) = se;
            out.stderr_(b, a) = se;
        }
    }
    return out;
}

Eigen::MatrixXd build_q_matrix_gaussian(std::size_t n) {
    if (n < 1) {
        throw InvalidParameter("Q matrix needs n >= 1");
    }
    const OrthogonalSystem sys = dual_hermite_system(n);
    const RootTuple z = hermite_roots(n);
    Eigen::MatrixXd q(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const Polynomial p = sys.orthonormal(k);
        for (std::size_t i = 0; i < n; ++i) {
            q(k, i) = norm * p(z[i]);
        }
    }
    return q;
}

Eigen::MatrixXd build_q_matrix_laguerre(std::size_t n, double alpha) {
    if (!(alpha > 0.0)) {
        throw InvalidParameter("Laguerre Q matrix requires alpha > 0");
    }
    if (n < 1) {
        throw InvalidParameter("Q matrix needs n >= 1");
    }
    const OrthogonalSystem sys = dual_laguerre_system(n, alpha);
    const RootTuple z = laguerre_roots(n, alpha);
    const double nd = static_cast<double>(n);
    const double norm = 1.0 / std::sqrt(nd * (nd + alpha - 1.0));
    Eigen::MatrixXd q(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const Polynomial p = sys.orthonormal(k);
        for (std::size_t i = 0; i < n; ++i) {
            q(k, i) = norm * std::sqrt(z[i]) * p(z[i]);
        }
    }
    return q;
}

namespace {

CovarianceReport covariance_report(const Eigen::MatrixXd& x, const Eigen::MatrixXd& q, double rel_tol) {
    const std::size_t n = static_cast<std::size_t>(x.cols());
    CovarianceReport rep;
    rep.samples = static_cast<std::size_t>(x.rows());
    rep.rel_tol = rel_tol;
    rep.sigma_hat = sample_covariance(x).cov;
    const Eigen::MatrixXd w = x * q.transpose();
    const SampleCovariance rot = sample_covariance(w);
    rep.rotated = rot.cov;
    rep.mc_stderr = rot.stderr_;
    rep.diag_pass = true;
    rep.off_diag_pass = true;
    for (std::size_t a = 0; a < n; ++a) {
        const double target = 1.0 / static_cast<double>(a + 1);
        rep.target_diag.push_back(target);
        rep.diag_rel_err.push_back(std::abs(rep.rotated(a, a) - target) / target);
        rep.diag_pass = rep.diag_pass && within_budget(rep.rotated(a, a), target, 0.0, rel_tol);
        for (std::size_t b = a + 1; b < n; ++b) {
            const double v = rep.rotated(a, b);
            const double se = rep.mc_stderr(a, b);
            rep.off_diag_max = std::max(rep.off_diag_max, std::abs(v));
            rep.off_diag_max_z = std::max(rep.off_diag_max_z, se > 0.0 ? std::abs(v) / se : 0.0);
            rep.off_diag_pass = rep.off_diag_pass && within_budget(v, 0.0, se);
        }
    }
    return rep;
}

} // namespace

CovarianceReport clt_covariance_gaussian(double beta, std::size_t n, std::size_t samples, std::uint64_t seed,
                                         double rel_tol) {
    const std::vector<double> draws = sample_gbe_batch(beta, n, samples, seed);
    const RootTuple z = hermite_roots(n);
    const double scale = std::sqrt(beta / 2.0);
    Eigen::MatrixXd x(samples, n);
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            x(s, i) = scale * (draws[s * n + i] - z[i]);
        }
    }
    return covariance_report(x, build_q_matrix_gaussian(n), rel_tol);
}

CovarianceReport clt_covariance_laguerre(double beta, std::size_t n, double alpha, std::size_t samples,
                                         std::uint64_t seed, double rel_tol) {
    const Eigen::MatrixXd q = build_q_matrix_laguerre(n, alpha);
    const std::vector<double> draws = sample_ble_batch(beta, alpha, n, samples, seed);
    const RootTuple z = laguerre_roots(n, alpha);
    const double scale = std::sqrt(2.0 * beta);
    Eigen::MatrixXd x(samples, n);
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            x(s, i) = scale * (std::sqrt(draws[s * n + i]) - std::sqrt(z[i]));
        }
    }
    return covariance_report(x, q, rel_tol);
}

PrimitiveReport primitive_clt_check(ProcessKind kind, double beta, std::size_t n, double alpha, std::size_t samples,
                                    std::uint64_t seed, double rel_tol) {
    const bool gauss = kind == ProcessKind::gaussian;
    const OrthogonalSystem sys = gauss ? dual_hermite_system(n) : dual_laguerre_system(n, alpha);
    const RootTuple z = gauss ? hermite_roots(n) : laguerre_roots(n, alpha);
    const std::vector<double> draws =
        gauss ? sample_gbe_batch(beta, n, samples, seed) : sample_ble_batch(beta, alpha, n, samples, seed);
    const double nd = static_cast<double>(n);
    const double scale = std::sqrt(beta * nd / 2.0);

    std::vector<Polynomial> prim;
    std::vector<double> centre;
    for (std::size_t m = 0; m < n; ++m) {
        prim.push_back(primitive(sys, m));
        double acc = 0.0;
        for (double v : z) {
            acc += prim.back()(v);
        }
        centre.push_back(acc / nd);
    }
    Eigen::MatrixXd stat(samples, n);
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t m = 0; m < n; ++m) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += prim[m](draws[s * n + i]);
            }
            stat(s, m) = scale * (acc / nd - centre[m]);
        }
    }
    const SampleCovariance cov = sample_covariance(stat);
    PrimitiveReport rep;
    rep.kind = kind;
    rep.covariance = cov.cov;
    rep.stderr_ = cov.stderr_;
    rep.samples = samples;
    rep.rel_tol = rel_tol;
    rep.var_pass = true;
    rep.cross_pass = true;
    for (std::size_t m = 0; m < n; ++m) {
        const double h = sys.squared_norms()[m];
        const double target = (gauss ? 1.0 : alpha + nd - 1.0) * h / static_cast<double>(m + 1);
        rep.target_var.push_back(target);
        rep.var_rel_err.push_back(std::abs(rep.covariance(m, m) - target) / target);
        rep.var_pass = rep.var_pass && within_budget(rep.covariance(m, m), target, 0.0, rel_tol);
        for (std::size_t l = m + 1; l < n; ++l) {
            rep.cross_pass = rep.cross_pass && within_budget(rep.covariance(m, l), 0.0, rep.stderr_(m, l));
        }
    }
    return rep;
}

namespace {

struct Welford {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        count += 1.0;
        const double delta = v - mean;
        mean += delta / count;
        m2 += delta * (v - mean);
    }
    double stderr_() const { return count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0; }
};

} // namespace

MomentProcessEstimate moment_process_estimate(const PathEnsemble& ensemble, std::size_t max_order) {
    MomentProcessEstimate est;
    est.times = ensemble.config.record_times;
    const double nd = static_cast<double>(ensemble.n());
    for (std::size_t r = 0; r < ensemble.times(); ++r) {
        std::vector<Welford> acc(max_order + 1);
        for (std::size_t p = 0; p < ensemble.paths(); ++p) {
            const auto x = ensemble.at(p, r);
            for (std::size_t k = 0; k <= max_order; ++k) {
                double s = 0.0;
                for (double v : x) {
                    s += std::pow(v, static_cast<double>(k));
                }
                acc[k].add(s / nd);
            }
        }
        std::vector<double> mean, se;
        for (const auto& a : acc) {
            mean.push_back(a.mean);
            se.push_back(a.stderr_());
        }
        est.s_hat.push_back(std::move(mean));
        est.stderr_.push_back(std::move(se));
    }
    return est;
}

std::vector<DriftEntry> ek_drift_report(const PathEnsemble& ensemble) {
    const SimConfig& cfg = ensemble.config;
    const GkTrajectory traj = ensemble.kind == ProcessKind::gaussian ? gaussian_gk(cfg.initial)
                                                                     : laguerre_gk(cfg.initial, cfg.alpha);
    const std::size_t n = ensemble.n();
    std::vector<DriftEntry> out;
    for (std::size_t r = 0; r < ensemble.times(); ++r) {
        const double t = cfg.record_times[r];
        const std::vector<double> g = traj.at(t);
        std::vector<Welford> acc(n + 1);
        for (std::size_t p = 0; p < ensemble.paths(); ++p) {
            const std::vector<double> e = elementary_symmetric(ensemble.at(p, r));
            for (std::size_t k = 1; k <= n; ++k) {
                acc[k].add(e[k]);
            }
        }
        for (std::size_t k = 1; k <= n; ++k) {
            DriftEntry d;
            d.time = t;
            d.k = k;
            d.mean = acc[k].mean;
            d.stderr_ = acc[k].stderr_();
            d.target = g[k];
            d.budget = 3.0 * d.stderr_ + 5.0 * cfg.dt * std::max(1.0, std::abs(g[k]));
            d.pass = std::abs(d.mean - d.target) <= d.budget;
            out.push_back(d);
        }
    }
    return out;
}

std::vector<ProcessCltEntry> process_clt_check(const PathEnsemble& ensemble, std::size_t s_index,
                                               std::size_t t_index, std::size_t max_order) {
    if (ensemble.kind != ProcessKind::gaussian) {
        throw InvalidParameter("process CLT check is implemented for the Dyson ensemble");
    }
    if (s_index >= ensemble.times() || t_index >= ensemble.times()) {
        throw IndexOutOfRange("record index out of range");
    }
    const std::size_t n = ensemble.n();
    if (max_order >= n) {
        throw InvalidParameter("order must be below n");
    }
    const OrthogonalSystem sys = dual_hermite_system(n);
    const RootTuple z = hermite_roots(n);
    const double nd = static_cast<double>(n);
    const double scale = std::sqrt(ensemble.config.beta * nd / 2.0);
    const double s = ensemble.config.record_times[s_index];
    const double t = ensemble.config.record_times[t_index];

    std::vector<ProcessCltEntry> out;
    for (std::size_t m = 0; m <= max_order; ++m) {
        const Polynomial q = primitive(sys, m);
        double centre = 0.0;
        for (double v : z) {
            centre += q(v);
        }
        centre /= nd;
        auto eta = [&](std::size_t path, std::size_t r, double time) {
            double acc = 0.0;
            for (double v : ensemble.at(path, r)) {
                acc += scaled_primitive(sys, m, time, v);
            }
            return scale * (acc / nd - std::pow(time, 0.5 * static_cast<double>(m + 1)) * centre);
        };
        Eigen::MatrixXd pairs(ensemble.paths(), 2);
        for (std::size_t p = 0; p < ensemble.paths(); ++p) {
            pairs(p, 0) = eta(p, s_index, s);
            pairs(p, 1) = eta(p, t_index, t);
        }
        const SampleCovariance cov = sample_covariance(pairs);
        ProcessCltEntry e;
        e.order = m;
        e.s = s;
        e.t = t;
        e.estimate = cov.cov(0, 1);
        e.stderr_ = cov.stderr_(0, 1);
        e.target = sys.squared_norms()[m] / static_cast<double>(m + 1) *
                   std::pow(std::min(s, t), static_cast<double>(m + 1));
        e.pass = within_budget(e.estimate, e.target, e.stderr_);
        out.push_back(e);
    }
    return out;
}

} // namespace freezing
