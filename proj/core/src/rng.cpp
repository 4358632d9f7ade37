#include "rttkit/rng.hpp"

#include <cmath>
#include <numbers>

namespace rttkit {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) noexcept {
    return splitmix64(base ^ splitmix64(salt));
}

double RandomStream::gaussian() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard; smallest expressible draw
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::size_t RandomStream::poisson(double lambda) noexcept {
    if (lambda <= 0.0) return 0;
    // Inversion by sequential search: walk the CDF until it passes u.
    const double u = uniform();
    double p = std::exp(-lambda);
    double cdf = p;
    std::size_t k = 0;
    while (u >= cdf && p > 0.0) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

}  // namespace rttkit
