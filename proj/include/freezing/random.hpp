#pragma once

#include <array>
#include <cstdint>

namespace freezing {

/// Philox4x64-10 block function.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter, std::array<std::uint64_t, 2> key);

/// Counter-based stream: key (seed, stream id), counter advanced per block.
/// Distinct stream ids give independent sequences, so work items can be drawn
/// in any order or on any thread.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

    std::uint64_t next();
    /// Uniform on (0, 1), 53 random bits.
    double uniform();
    double normal();
    /// Gamma(shape, scale 1).
    double gamma(double shape);

private:
    std::array<std::uint64_t, 2> key_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 4> buffer_{};
    int used_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Chi distribution with k > 0 degrees of freedom.
double chi_sample(double k_dof, Philox& rng);

} // namespace freezing
