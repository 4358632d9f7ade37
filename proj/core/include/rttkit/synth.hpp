#pragma once

#include <cstdint>
#include <utility>

#include "rttkit/series.hpp"

namespace rttkit {

/// Recipe for a synthetic RTT series on a 5-minute grid starting at epoch 0.
/// The deterministic skeleton is base_rtt plus a daily cosine peaking at
/// 20:00 UTC plus weekend_boost on days 5 and 6 of each week (day 0 is the
/// first day of the series). On top of that: per-slot Gaussian noise,
/// Poisson-seeded rectangular congestion episodes of one hour (12 slots),
/// and Poisson-seeded gaps of gap_len missing slots. Values are floored at
/// 0.1 ms so they stay valid RTTs.
struct SynthSpec {
    double base_rtt = 50.0;       ///< ms, > 0
    double daily_amp = 0.0;       ///< ms, >= 0
    double weekend_boost = 0.0;   ///< ms, >= 0
    double noise_sigma = 0.0;     ///< ms, >= 0
    double episode_rate = 0.0;    ///< episodes per week, >= 0
    double episode_height = 0.0;  ///< ms added during an episode, >= 0
    double gap_rate = 0.0;        ///< gaps per week, >= 0
    std::size_t gap_len = 0;      ///< slots per gap
    std::size_t days = 1;         ///< series length in days (288 slots each)
    std::uint64_t seed = 0;
};

/// Throws Error{invalid_spec} describing the first violated bound.
void validate(const SynthSpec& spec);

/// Generates the series for one key. Draws come from three streams seeded
/// from (spec.seed, fnv1a64(to_string(key)), component): noise, episodes,
/// gaps. The same spec and key therefore reproduce the identical series,
/// independent of what else was generated, and different keys decorrelate.
/// With noise_sigma == 0 the noise stream is never drawn from. Episode and
/// gap placement: a Poisson(rate * days / 7) count, then one uniform start
/// slot per event.
TimeSeries generate(const SynthSpec& spec, const SeriesKey& key);

/// Generates two series whose noise components have Pearson correlation
/// target_rho by mixing each slot's two standard normals z1, z2 (one per
/// key's noise stream) as z1 and rho * z1 + sqrt(1 - rho^2) * z2. Episodes
/// and gaps are shared: their streams are seeded from the spec alone, so
/// both series get the same events. Requires distinct keys, |target_rho| <=
/// 1, and noise_sigma > 0, else Error{invalid_spec}.
std::pair<TimeSeries, TimeSeries> generate_correlated(const SynthSpec& spec,
                                                      const SeriesKey& key_a,
                                                      const SeriesKey& key_b, double target_rho);

}  // namespace rttkit
