#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rttkit {

/// Identity of one measured link: which monitor probed which interface of
/// which neighbor network, and on which side of the interconnection.
struct SeriesKey {
    std::string monitor;      ///< vantage point name, e.g. "bed-us"
    std::uint32_t asn = 0;    ///< neighbor autonomous system number, >= 1
    int ind = 0;              ///< 0 = near-side router, 1 = far-side router
    std::string target;       ///< probed interface address
    std::string link;         ///< interconnection identifier

    /// Ordering is by (monitor, asn, ind, target, link).
    friend auto operator<=>(const SeriesKey&, const SeriesKey&) = default;
    friend bool operator==(const SeriesKey&, const SeriesKey&) = default;
};

/// True when every string field is non-empty and free of whitespace and
/// commas, asn >= 1, and ind is 0 or 1.
bool is_valid(const SeriesKey& key) noexcept;

/// Single-line form "monitor asn ind target link". Fields never contain
/// spaces, so the encoding is unambiguous.
std::string to_string(const SeriesKey& key);

/// Inverse of to_string(). Returns nullopt for anything that does not parse
/// back into a valid key.
std::optional<SeriesKey> key_from_string(std::string_view text);

/// Uniform time grid: slot i covers the instant epoch_start + i * interval.
struct GridSpec {
    std::int64_t epoch_start = 0;  ///< UTC seconds of slot 0
    std::int64_t interval = 300;   ///< seconds between slots, > 0
    std::size_t length = 0;        ///< number of slots

    /// Nominal timestamp of a slot. Not bounds-checked; callers may project
    /// past the end when describing forecast horizons.
    std::int64_t slot_time(std::size_t slot) const noexcept {
        return epoch_start + static_cast<std::int64_t>(slot) * interval;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Maps a raw timestamp to the nearest slot, or nullopt when the timestamp
/// falls outside the grid. A timestamp exactly halfway between two slots
/// belongs to the later one. Throws Error{invalid_argument} when the grid
/// interval is not positive.
std::optional<std::size_t> slot_of(std::int64_t timestamp, const GridSpec& grid);

/// One grid slot: an RTT in milliseconds, or nothing when no probe landed
/// there. Missing is an explicit state, not a sentinel value.
using Observation = std::optional<double>;

inline constexpr Observation kMissing = std::nullopt;

/// A regularized RTT series: one observation per grid slot. Present values
/// are always finite and positive.
class TimeSeries {
public:
    /// Throws Error{invalid_value} when the key is invalid or any present
    /// value is non-finite or <= 0, Error{invalid_argument} when the value
    /// count does not match grid.length or the interval is not positive.
    TimeSeries(SeriesKey key, GridSpec grid, std::vector<Observation> values);

    const SeriesKey& key() const noexcept { return key_; }
    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    const Observation& operator[](std::size_t slot) const noexcept { return values_[slot]; }
    const std::vector<Observation>& values() const noexcept { return values_; }

    std::size_t present_count() const noexcept { return present_; }
    std::size_t missing_count() const noexcept { return values_.size() - present_; }

private:
    SeriesKey key_;
    GridSpec grid_;
    std::vector<Observation> values_;
    std::size_t present_ = 0;
};

/// Sub-series of `count` slots starting at `from`. The slice keeps the key;
/// its grid starts at the sliced slot's timestamp. Throws
/// Error{invalid_argument} when the range exceeds the series.
TimeSeries slice(const TimeSeries& series, std::size_t from, std::size_t count);

/// Half-open slot range [first, last) spanning the present observations.
/// Returns {0, 0} for an all-missing series.
std::pair<std::size_t, std::size_t> present_extent(const TimeSeries& series) noexcept;

/// One raw probe result, before grid alignment.
struct ProbeRecord {
    SeriesKey key;
    std::int64_t timestamp = 0;  ///< UTC seconds, >= 0
    double rtt_ms = 0.0;         ///< finite, > 0

    friend bool operator==(const ProbeRecord&, const ProbeRecord&) = default;
};

bool is_valid(const ProbeRecord& record) noexcept;

}  // namespace rttkit
