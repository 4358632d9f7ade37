#include "rttkit/series.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "rttkit/errors.hpp"

namespace rttkit {

namespace {

bool field_ok(const std::string& s) {
    if (s.empty()) return false;
    return std::none_of(s.begin(), s.end(), [](unsigned char c) {
        return c == ',' || std::isspace(c) != 0;
    });
}

/// Floor division: the largest q with q * d <= n, for d > 0.
std::int64_t floor_div(std::int64_t n, std::int64_t d) noexcept {
    std::int64_t q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
}

}  // namespace

bool is_valid(const SeriesKey& key) noexcept {
    return field_ok(key.monitor) && field_ok(key.target) && field_ok(key.link) && key.asn >= 1 &&
           (key.ind == 0 || key.ind == 1);
}

std::string to_string(const SeriesKey& key) {
    std::ostringstream out;
    out << key.monitor << ' ' << key.asn << ' ' << key.ind << ' ' << key.target << ' ' << key.link;
    return out.str();
}

std::optional<SeriesKey> key_from_string(std::string_view text) {
    SeriesKey key;
    std::string asn, ind;
    std::string* fields[5] = {&key.monitor, &asn, &ind, &key.target, &key.link};
    std::size_t field = 0, pos = 0;
    while (pos <= text.size() && field < 5) {
        std::size_t next = text.find(' ', pos);
        if (next == std::string_view::npos) next = text.size();
        *fields[field++] = std::string(text.substr(pos, next - pos));
        pos = next + 1;
    }
    if (field != 5 || pos <= text.size()) return std::nullopt;  // wrong field count
    auto [aend, aec] = std::from_chars(asn.data(), asn.data() + asn.size(), key.asn);
    if (aec != std::errc{} || aend != asn.data() + asn.size()) return std::nullopt;
    if (ind == "0") key.ind = 0;
    else if (ind == "1") key.ind = 1;
    else return std::nullopt;
    if (!is_valid(key)) return std::nullopt;
    return key;
}

std::optional<std::size_t> slot_of(std::int64_t timestamp, const GridSpec& grid) {
    if (grid.interval <= 0) throw Error(Errc::invalid_argument, "grid interval must be positive");
    // Nearest slot via floor((delta + interval/2) / interval); the +half
    // pushes an exact midpoint to the later slot.
    const std::int64_t delta = timestamp - grid.epoch_start + grid.interval / 2;
    const std::int64_t idx = floor_div(delta, grid.interval);
    if (idx < 0 || static_cast<std::uint64_t>(idx) >= grid.length) return std::nullopt;
    return static_cast<std::size_t>(idx);
}

TimeSeries::TimeSeries(SeriesKey key, GridSpec grid, std::vector<Observation> values)
    : key_(std::move(key)), grid_(grid), values_(std::move(values)) {
    if (grid_.interval <= 0) throw Error(Errc::invalid_argument, "grid interval must be positive");
    if (!is_valid(key_)) throw Error(Errc::invalid_value, "invalid series key: " + to_string(key_));
    if (values_.size() != grid_.length)
        throw Error(Errc::invalid_argument, "value count does not match grid length");
    for (const Observation& v : values_) {
        if (!v) continue;
        if (!std::isfinite(*v) || *v <= 0.0)
            throw Error(Errc::invalid_value, "rtt values must be finite and positive");
        ++present_;
    }
}

TimeSeries slice(const TimeSeries& series, std::size_t from, std::size_t count) {
    if (from > series.size() || count > series.size() - from)
        throw Error(Errc::invalid_argument, "slice range exceeds series length");
    GridSpec grid = series.grid();
    grid.epoch_start = grid.slot_time(from);
    grid.length = count;
    std::vector<Observation> values(series.values().begin() + static_cast<std::ptrdiff_t>(from),
                                    series.values().begin() + static_cast<std::ptrdiff_t>(from + count));
    return TimeSeries(series.key(), grid, std::move(values));
}

std::pair<std::size_t, std::size_t> present_extent(const TimeSeries& series) noexcept {
    const auto& v = series.values();
    std::size_t first = 0;
    while (first < v.size() && !v[first]) ++first;
    if (first == v.size()) return {0, 0};
    std::size_t last = v.size();
    while (!v[last - 1]) --last;
    return {first, last};
}

bool is_valid(const ProbeRecord& record) noexcept {
    return is_valid(record.key) && record.timestamp >= 0 && std::isfinite(record.rtt_ms) &&
           record.rtt_ms > 0.0;
}

}  // namespace rttkit
