#include "freezing/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "freezing/orthopoly.hpp"
#include "freezing/random.hpp"

namespace freezing {

void SimConfig::validate(ProcessKind kind) const {
    if (!(beta >= 1.0)) {
        throw InvalidParameter("simulation requires beta >= 1");
    }
    if (initial.empty() || n != initial.size()) {
        throw DimensionMismatch("initial tuple must have n entries");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidParameter("dt must be positive");
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw InvalidParameter("t_end must be nonnegative");
    }
    if (paths < 1) {
        throw InvalidParameter("paths must be at least 1");
    }
    for (std::size_t r = 0; r < record_times.size(); ++r) {
        if (!(record_times[r] >= 0.0) || record_times[r] > t_end) {
            throw InvalidParameter("record times must lie in [0, t_end]");
        }
        if (r > 0 && record_times[r] < record_times[r - 1]) {
            throw InvalidParameter("record times must be sorted");
        }
    }
    if (kind == ProcessKind::laguerre) {
        if (!(alpha > 0.0)) {
            throw InvalidParameter("laguerre simulation requires alpha > 0");
        }
        if (initial[0] < 0.0) {
            throw InvalidParameter("laguerre simulation requires a nonnegative initial tuple");
        }
    }
}

std::span<const double> PathEnsemble::at(std::size_t path, std::size_t time) const {
    if (path >= paths() || time >= times()) {
        throw IndexOutOfRange("path or time index out of range");
    }
    return std::span<const double>(data).subspan((path * times() + time) * n(), n());
}

std::size_t worker_threads() {
    std::size_t count = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FREEZING_DYSON_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) {
                count = std::min<std::size_t>(count, static_cast<std::size_t>(cap));
            }
        } catch (const std::exception&) {
        }
    }
    return count;
}

void parallel_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t workers = std::min(worker_threads(), count);
    if (workers <= 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex guard;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard lock(guard);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

namespace {

// Sub-steps are limited so that no particle moves more than this fraction of
// the smallest gap through the drift alone.
constexpr double kDriftFraction = 0.05;
constexpr std::uint64_t kMaxSubsteps = 50'000'000;

struct PathStats {
    std::uint64_t clamps = 0;
    std::uint64_t steps = 0;
};

class Stepper {
public:
    Stepper(ProcessKind kind, const SimConfig& cfg)
        : kind_(kind), n_(cfg.n), alpha_(cfg.alpha), noise_(kind == ProcessKind::gaussian
                                                              ? std::sqrt(2.0 / cfg.beta)
                                                              : 2.0 / std::sqrt(cfg.beta)),
          drift_(cfg.n) {}

    // Advances x (sorted) by exactly h, refining as needed.
    void advance(std::vector<double>& x, double h, Philox& rng, PathStats& stats) {
        double left = h;
        std::uint64_t substeps = 0;
        while (left > 0.0) {
            const double min_gap = compute_drift(x, stats);
            double max_drift = 0.0;
            for (double d : drift_) {
                max_drift = std::max(max_drift, std::abs(d));
            }
            double step = left;
            if (max_drift > 0.0 && n_ > 1) {
                step = std::min(step, kDriftFraction * min_gap / max_drift);
            }
            if (step >= left * (1.0 - 1e-12)) {
                step = left;
            }
            const double root = std::sqrt(step);
            for (std::size_t i = 0; i < n_; ++i) {
                const double scale = kind_ == ProcessKind::gaussian ? noise_ : noise_ * std::sqrt(x[i]);
                x[i] += drift_[i] * step + scale * root * rng.normal();
            }
            if (kind_ == ProcessKind::laguerre) {
                for (double& v : x) {
                    v = std::abs(v);
                }
            }
            std::sort(x.begin(), x.end());
            for (double v : x) {
                if (!(std::abs(v) <= unstable_bound)) {
                    throw StepUnstable("particle left the stable range; reduce dt");
                }
            }
            left = step == left ? 0.0 : left - step;
            ++stats.steps;
            if (++substeps > kMaxSubsteps) {
                throw StepUnstable("step refinement did not terminate");
            }
        }
    }

private:
    // Fills drift_; returns the smallest (clamped) neighbour gap.
    double compute_drift(const std::vector<double>& x, PathStats& stats) {
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_; ++i) {
            drift_[i] = kind_ == ProcessKind::gaussian ? 0.0 : alpha_;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                double diff = x[j] - x[i];
                if (diff < gap_floor) {
                    diff = gap_floor;
                    ++stats.clamps;
                }
                if (j == i + 1) {
                    min_gap = std::min(min_gap, diff);
                }
                const double inv = 1.0 / diff;
                if (kind_ == ProcessKind::gaussian) {
                    drift_[i] -= inv;
                    drift_[j] += inv;
                } else {
                    drift_[i] -= 2.0 * x[i] * inv;
                    drift_[j] += 2.0 * x[j] * inv;
                }
            }
        }
        return min_gap;
    }

    ProcessKind kind_;
    std::size_t n_;
    double alpha_;
    double noise_;
    std::vector<double> drift_;
};

} // namespace

PathEnsemble simulate(ProcessKind kind, const SimConfig& input) {
    SimConfig cfg = input;
    if (cfg.n == 0) {
        cfg.n = cfg.initial.size();
    }
    if (cfg.record_times.empty()) {
        cfg.record_times = {cfg.t_end};
    }
    cfg.validate(kind);

    PathEnsemble out;
    out.config = cfg;
    out.kind = kind;
    const std::size_t n = cfg.n;
    const std::size_t times = cfg.record_times.size();
    out.data.assign(cfg.paths * times * n, 0.0);

    std::vector<PathStats> stats(cfg.paths);
    parallel_chunks(cfg.paths, [&](std::size_t begin, std::size_t end) {
        Stepper stepper(kind, cfg);
        for (std::size_t p = begin; p < end; ++p) {
            Philox rng(cfg.seed, p);
            std::vector<double> x = cfg.initial.vector();
            double t = 0.0;
            for (std::size_t r = 0; r < times; ++r) {
                const double target = cfg.record_times[r];
                while (t < target) {
                    double next = t + cfg.dt;
                    if (next > target * (1.0 - 1e-12)) {
                        next = target;
                    }
                    stepper.advance(x, next - t, rng, stats[p]);
                    t = next;
                }
                std::copy(x.begin(), x.end(), out.data.begin() + static_cast<std::ptrdiff_t>((p * times + r) * n));
            }
        }
    });
    for (const auto& s : stats) {
        out.gap_clamps += s.clamps;
        out.steps += s.steps;
    }
    return out;
}

PathEnsemble simulate_dyson(const SimConfig& cfg) { return simulate(ProcessKind::gaussian, cfg); }

PathEnsemble simulate_laguerre(const SimConfig& cfg) { return simulate(ProcessKind::laguerre, cfg); }

RootTuple sample_gbe(double beta, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    if (!(beta > 0.0)) {
        throw InvalidParameter("sample_gbe requires beta > 0");
    }
    if (n == 0) {
        throw InvalidParameter("sample_gbe requires n >= 1");
    }
    Philox rng(seed, stream);
    const double scale = 1.0 / std::sqrt(beta);
    std::vector<double> diag(n), off(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = std::sqrt(2.0) * scale * rng.normal();
    }
    for (std::size_t i = 1; i < n; ++i) {
        off[i - 1] = scale * chi_sample(static_cast<double>(n - i) * beta, rng);
    }
    return eigen_tridiag(JacobiMatrix(std::move(diag), std::move(off)));
}

RootTuple sample_ble(double beta, double alpha, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    if (!(beta > 0.0) || !(alpha > 0.0)) {
        throw InvalidParameter("sample_ble requires beta > 0 and alpha > 0");
    }
    if (n == 0) {
        throw InvalidParameter("sample_ble requires n >= 1");
    }
    Philox rng(seed, stream);
    const double scale = 1.0 / std::sqrt(beta);
    std::vector<double> d(n), s(n, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        d[i - 1] = scale * chi_sample(beta * (alpha + static_cast<double>(n - i)), rng);
    }
    for (std::size_t i = 1; i < n; ++i) {
        s[i - 1] = scale * chi_sample(beta * static_cast<double>(n - i), rng);
    }
    // B lower bidiagonal; B^T B is tridiagonal.
    std::vector<double> diag(n), off(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = d[i] * d[i] + s[i] * s[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        off[i] = s[i] * d[i + 1];
    }
    const RootTuple ev = eigen_tridiag(JacobiMatrix(std::move(diag), std::move(off)));
    std::vector<double> v = ev.vector();
    for (double& x : v) {
        x = std::max(x, 0.0);
    }
    return RootTuple(std::move(v));
}

std::vector<double> sample_gbe_batch(double beta, std::size_t n, std::size_t samples, std::uint64_t seed) {
    std::vector<double> out(samples * n);
    parallel_chunks(samples, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            const RootTuple r = sample_gbe(beta, n, seed, s);
            std::copy(r.begin(), r.end(), out.begin() + static_cast<std::ptrdiff_t>(s * n));
        }
    });
    return out;
}

std::vector<double> sample_ble_batch(double beta, double alpha, std::size_t n, std::size_t samples,
                                     std::uint64_t seed) {
    std::vector<double> out(samples * n);
    parallel_chunks(samples, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            const RootTuple r = sample_ble(beta, alpha, n, seed, s);
            std::copy(r.begin(), r.end(), out.begin() + static_cast<std::ptrdiff_t>(s * n));
        }
    });
    return out;
}

} // namespace freezing
