#include "rttkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rttkit/errors.hpp"
#include "rttkit/rng.hpp"

namespace rttkit {

namespace {

constexpr std::size_t kSlotsPerDay = 288;     // 5-minute grid
constexpr std::size_t kEpisodeSlots = 12;     // one hour
constexpr std::size_t kPeakSlot = 240;        // 20:00 UTC
constexpr double kFloorMs = 0.1;

// Sub-stream tags; each (seed, key, component) triple is its own stream.
constexpr std::uint64_t kNoiseSalt = 1;
constexpr std::uint64_t kEpisodeSalt = 2;
constexpr std::uint64_t kGapSalt = 3;

void require(bool ok, const char* message) {
    if (!ok) throw Error(Errc::invalid_spec, message);
}

/// base + daily cosine + weekend lift, before any random component.
double skeleton(const SynthSpec& spec, std::size_t slot) noexcept {
    const std::size_t slot_of_day = slot % kSlotsPerDay;
    const std::size_t day = slot / kSlotsPerDay;
    const double phase = 2.0 * std::numbers::pi *
                         (static_cast<double>(slot_of_day) - static_cast<double>(kPeakSlot)) /
                         static_cast<double>(kSlotsPerDay);
    double v = spec.base_rtt + spec.daily_amp * std::cos(phase);
    if (day % 7 >= 5) v += spec.weekend_boost;
    return v;
}

double weeks(const SynthSpec& spec) noexcept {
    return static_cast<double>(spec.days) / 7.0;
}

std::uint64_t key_salt(const SeriesKey& key) { return fnv1a64(to_string(key)); }

std::uint64_t stream_seed(const SynthSpec& spec, std::uint64_t salt, std::uint64_t component) {
    return derive_seed(derive_seed(spec.seed, salt), component);
}

/// Adds episode_height over [start, start + kEpisodeSlots) for each episode.
void apply_episodes(const SynthSpec& spec, RandomStream& stream, std::vector<double>& values) {
    if (spec.episode_rate <= 0.0 || spec.episode_height <= 0.0 || values.empty()) return;
    const std::size_t count = stream.poisson(spec.episode_rate * weeks(spec));
    for (std::size_t e = 0; e < count; ++e) {
        const auto start = static_cast<std::size_t>(stream.uniform() *
                                                    static_cast<double>(values.size()));
        const std::size_t stop = std::min(start + kEpisodeSlots, values.size());
        for (std::size_t i = start; i < stop; ++i) values[i] += spec.episode_height;
    }
}

/// Blanks [start, start + gap_len) for each gap.
void apply_gaps(const SynthSpec& spec, RandomStream& stream, std::vector<Observation>& slots) {
    if (spec.gap_rate <= 0.0 || spec.gap_len == 0 || slots.empty()) return;
    const std::size_t count = stream.poisson(spec.gap_rate * weeks(spec));
    for (std::size_t g = 0; g < count; ++g) {
        const auto start = static_cast<std::size_t>(stream.uniform() *
                                                    static_cast<double>(slots.size()));
        const std::size_t stop = std::min(start + spec.gap_len, slots.size());
        for (std::size_t i = start; i < stop; ++i) slots[i] = kMissing;
    }
}

TimeSeries assemble(const SynthSpec& spec, const SeriesKey& key, std::vector<double> values) {
    std::vector<Observation> slots(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) slots[i] = std::max(values[i], kFloorMs);
    RandomStream gap_stream{stream_seed(spec, key_salt(key), kGapSalt)};
    apply_gaps(spec, gap_stream, slots);
    const GridSpec grid{0, 300, slots.size()};
    return TimeSeries(key, grid, std::move(slots));
}

}  // namespace

void validate(const SynthSpec& spec) {
    require(std::isfinite(spec.base_rtt) && spec.base_rtt > 0.0, "base_rtt must be positive");
    require(std::isfinite(spec.daily_amp) && spec.daily_amp >= 0.0,
            "daily_amp must not be negative");
    require(std::isfinite(spec.weekend_boost) && spec.weekend_boost >= 0.0,
            "weekend_boost must not be negative");
    require(std::isfinite(spec.noise_sigma) && spec.noise_sigma >= 0.0,
            "noise_sigma must not be negative");
    require(std::isfinite(spec.episode_rate) && spec.episode_rate >= 0.0,
            "episode_rate must not be negative");
    require(std::isfinite(spec.episode_height) && spec.episode_height >= 0.0,
            "episode_height must not be negative");
    require(std::isfinite(spec.gap_rate) && spec.gap_rate >= 0.0,
            "gap_rate must not be negative");
}

TimeSeries generate(const SynthSpec& spec, const SeriesKey& key) {
    validate(spec);
    if (!is_valid(key)) throw Error(Errc::invalid_value, "invalid series key: " + to_string(key));
    const std::size_t n = spec.days * kSlotsPerDay;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = skeleton(spec, i);
    if (spec.noise_sigma > 0.0) {
        RandomStream noise{stream_seed(spec, key_salt(key), kNoiseSalt)};
        for (std::size_t i = 0; i < n; ++i) values[i] += spec.noise_sigma * noise.gaussian();
    }
    RandomStream episodes{stream_seed(spec, key_salt(key), kEpisodeSalt)};
    apply_episodes(spec, episodes, values);
    return assemble(spec, key, std::move(values));
}

std::pair<TimeSeries, TimeSeries> generate_correlated(const SynthSpec& spec,
                                                      const SeriesKey& key_a,
                                                      const SeriesKey& key_b, double target_rho) {
    validate(spec);
    require(std::isfinite(target_rho) && std::abs(target_rho) <= 1.0,
            "target_rho must lie in [-1, 1]");
    require(spec.noise_sigma > 0.0, "correlated generation needs noise_sigma > 0");
    require(key_a != key_b, "correlated generation needs distinct keys");
    if (!is_valid(key_a) || !is_valid(key_b))
        throw Error(Errc::invalid_value, "invalid series key");

    const std::size_t n = spec.days * kSlotsPerDay;
    std::vector<double> va(n), vb(n);
    RandomStream na{stream_seed(spec, key_salt(key_a), kNoiseSalt)};
    RandomStream nb{stream_seed(spec, key_salt(key_b), kNoiseSalt)};
    const double cross = std::sqrt(1.0 - target_rho * target_rho);
    for (std::size_t i = 0; i < n; ++i) {
        const double base = skeleton(spec, i);
        const double z1 = na.gaussian();
        const double z2 = nb.gaussian();
        va[i] = base + spec.noise_sigma * z1;
        vb[i] = base + spec.noise_sigma * (target_rho * z1 + cross * z2);
    }
    // Shared events: seeded from the spec alone so both series see the same
    // episodes and gaps.
    RandomStream episodes{derive_seed(spec.seed, kEpisodeSalt)};
    apply_episodes(spec, episodes, va);
    {
        RandomStream replay{derive_seed(spec.seed, kEpisodeSalt)};
        apply_episodes(spec, replay, vb);
    }
    std::vector<Observation> sa(n), sb(n);
    for (std::size_t i = 0; i < n; ++i) {
        sa[i] = std::max(va[i], kFloorMs);
        sb[i] = std::max(vb[i], kFloorMs);
    }
    RandomStream gaps{derive_seed(spec.seed, kGapSalt)};
    apply_gaps(spec, gaps, sa);
    {
        RandomStream replay{derive_seed(spec.seed, kGapSalt)};
        apply_gaps(spec, replay, sb);
    }
    const GridSpec grid{0, 300, n};
    return {TimeSeries(key_a, grid, std::move(sa)), TimeSeries(key_b, grid, std::move(sb))};
}

}  // namespace rttkit
