#include "freezing/random.hpp"

#include <cmath>
#include <numbers>

#include "freezing/error.hpp"

namespace freezing {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

__extension__ using uint128 = unsigned __int128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
    const uint128 p = static_cast<uint128>(a) * b;
    lo = static_cast<std::uint64_t>(p);
    hi = static_cast<std::uint64_t>(p >> 64);
}

} // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr, std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        std::uint64_t lo0, hi0, lo1, hi1;
        mulhilo(kM0, ctr[0], lo0, hi0);
        mulhilo(kM1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint64_t Philox::next() {
    if (used_ == 4) {
        buffer_ = philox4x64({block_++, 0, 0, 0}, key_);
        used_ = 0;
    }
    return buffer_[used_++];
}

double Philox::uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Philox::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

// Marsaglia-Tsang; shape < 1 goes through Gamma(shape + 1) * U^{1/shape}.
double Philox::gamma(double shape) {
    if (!(shape > 0.0)) {
        throw InvalidParameter("gamma shape must be positive");
    }
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double chi_sample(double k_dof, Philox& rng) {
    if (!(k_dof > 0.0)) {
        throw InvalidParameter("chi degrees of freedom must be positive");
    }
    double g = 0.0;
    while (!(g > 0.0)) {
        g = rng.gamma(0.5 * k_dof);
    }
    return std::sqrt(2.0 * g);
}

} // namespace freezing
