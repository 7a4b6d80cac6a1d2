#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "freezing/dynamics.hpp"
#include "freezing/stochastic.hpp"

namespace freezing {

/// |estimate - target| <= max(3 stderr, rel_tol |target|).
bool within_budget(double estimate, double target, double stderr_, double rel_tol = 0.0);

/// Unbiased sample covariance of the columns of `x` (rows are samples) and
/// fourth-moment plug-in standard errors of each entry.
struct SampleCovariance {
    Eigen::MatrixXd cov;
    Eigen::MatrixXd stderr_;
    Eigen::VectorXd mean;
};
SampleCovariance sample_covariance(const Eigen::MatrixXd& x);

Eigen::MatrixXd build_q_matrix_gaussian(std::size_t n);
Eigen::MatrixXd build_q_matrix_laguerre(std::size_t n, double alpha);

struct CovarianceReport {
    Eigen::MatrixXd sigma_hat;
    Eigen::MatrixXd rotated;
    /// Standard errors of the rotated entries.
    Eigen::MatrixXd mc_stderr;
    std::vector<double> target_diag;
    std::vector<double> diag_rel_err;
    double off_diag_max = 0.0;
    /// Largest |off-diagonal| / stderr.
    double off_diag_max_z = 0.0;
    std::size_t samples = 0;
    double rel_tol = 0.05;
    bool diag_pass = false;
    bool off_diag_pass = false;

    bool passed() const noexcept { return diag_pass && off_diag_pass; }
};

CovarianceReport clt_covariance_gaussian(double beta, std::size_t n, std::size_t samples, std::uint64_t seed,
                                         double rel_tol = 0.05);
CovarianceReport clt_covariance_laguerre(double beta, std::size_t n, double alpha, std::size_t samples,
                                         std::uint64_t seed, double rel_tol = 0.05);

struct PrimitiveReport {
    ProcessKind kind = ProcessKind::gaussian;
    /// Covariance of the statistics for orders 0..N-1.
    Eigen::MatrixXd covariance;
    Eigen::MatrixXd stderr_;
    std::vector<double> target_var;
    std::vector<double> var_rel_err;
    std::size_t samples = 0;
    double rel_tol = 0.05;
    bool var_pass = false;
    bool cross_pass = false;

    bool passed() const noexcept { return var_pass && cross_pass; }
};

PrimitiveReport primitive_clt_check(ProcessKind kind, double beta, std::size_t n, double alpha, std::size_t samples,
                                    std::uint64_t seed, double rel_tol = 0.05);

struct MomentProcessEstimate {
    std::vector<double> times;
    /// s_hat[r][k] estimates S_k at times[r], k = 0..max_order.
    std::vector<std::vector<double>> s_hat;
    std::vector<std::vector<double>> stderr_;
};

MomentProcessEstimate moment_process_estimate(const PathEnsemble& ensemble, std::size_t max_order);

struct DriftEntry {
    double time = 0.0;
    std::size_t k = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    double target = 0.0;
    double budget = 0.0;
    bool pass = false;
};

/// Ensemble means of e_k at every record time against g_k(t), with budget
/// 3 stderr + 5 dt max(1, |g_k(t)|).
std::vector<DriftEntry> ek_drift_report(const PathEnsemble& ensemble);

struct ProcessCltEntry {
    std::size_t order = 0;
    double s = 0.0;
    double t = 0.0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    double target = 0.0;
    bool pass = false;
};

/// Cross-time covariance of the rescaled primitive fluctuations of a
/// zero-started Dyson ensemble at record indices (s_index, t_index).
std::vector<ProcessCltEntry> process_clt_check(const PathEnsemble& ensemble, std::size_t s_index,
                                               std::size_t t_index, std::size_t max_order);

} // namespace freezing
