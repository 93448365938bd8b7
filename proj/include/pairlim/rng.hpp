#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pairlim {

/// Seeded random stream.
///
/// The engine is std::mt19937_64. Replicate streams are keyed by
/// (seed, stream index) through std::seed_seq, which gives 2^64 distinct
/// streams per seed. Uniforms are built from the raw 64-bit output and
/// exponentials by inverse CDF so sample paths do not depend on the standard
/// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                          0x70a1u};
        engine_.seed(seq);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate, -log(1 - U) / rate.
    double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }

    /// Standard normal (Box-Muller on two uniforms, one value per call).
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    std::uint64_t next_u64() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace pairlim
