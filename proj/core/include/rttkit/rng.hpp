#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rttkit {

/// Deterministic random primitives for the synthesizer. Every step is fully
/// specified so any implementation of this contract reproduces the same
/// draws bit for bit on any platform:
///
///  - splitmix64: the SplitMix64 finalizer, used to derive and mix seeds.
///  - fnv1a64: FNV-1a over bytes, used to hash series keys into seed salts.
///  - RandomStream: a std::mt19937_64 engine (its output sequence is fixed
///    by the C++ standard). uniform() maps one engine draw to [0, 1) as
///    (x >> 11) * 2^-53; gaussian() applies the Box-Muller transform
///    sqrt(-2 ln u1) * {cos, sin}(2 pi u2) to two uniforms, returning the
///    cosine branch first and caching the sine branch; poisson(lambda)
///    counts uniform draws by inversion (cumulative search from k = 0).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Seed for a sub-stream: splitmix64(base ^ splitmix64(salt)). Chaining
/// derive_seed keeps independently salted streams decorrelated.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) noexcept;

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// 53-bit uniform in [0, 1).
    double uniform() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; u1 is nudged away from 0 so the log
    /// stays finite.
    double gaussian() noexcept;

    /// Poisson count by inversion. lambda must be non-negative and modest
    /// (event counts per series, not per slot).
    std::size_t poisson(double lambda) noexcept;

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rttkit
