#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rttkit/errors.hpp"
#include "rttkit/series.hpp"

namespace testutil {

inline rttkit::SeriesKey key(std::string target = "t0", std::string link = "l0",
                             std::string monitor = "bed-us", std::uint32_t asn = 15169,
                             int ind = 0) {
    return {std::move(monitor), asn, ind, std::move(target), std::move(link)};
}

inline rttkit::TimeSeries series(std::vector<rttkit::Observation> values,
                                 rttkit::SeriesKey k = key(), std::int64_t epoch = 0,
                                 std::int64_t interval = 300) {
    const rttkit::GridSpec grid{epoch, interval, values.size()};
    return rttkit::TimeSeries(std::move(k), grid, std::move(values));
}

inline std::vector<rttkit::Observation> wrap(const std::vector<double>& values) {
    return {values.begin(), values.end()};
}

/// Error code thrown by fn, or nullopt when it did not raise rttkit::Error.
template <typename Fn>
std::optional<rttkit::Errc> code_of(Fn&& fn) {
    try {
        std::forward<Fn>(fn)();
    } catch (const rttkit::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace testutil
