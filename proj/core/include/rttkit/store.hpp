#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "rttkit/series.hpp"

namespace rttkit {

/// Counters accumulated while turning raw input into grid-aligned series.
struct IngestStats {
    std::size_t records_read = 0;      ///< records seen, valid or not
    std::size_t records_rejected = 0;  ///< invalid or outside the grid
    std::size_t slots_filled = 0;      ///< grid slots that ended up present
    std::size_t collisions = 0;        ///< records that hit an occupied slot

    IngestStats& operator+=(const IngestStats& other) noexcept {
        records_read += other.records_read;
        records_rejected += other.records_rejected;
        slots_filled += other.slots_filled;
        collisions += other.collisions;
        return *this;
    }

    friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

/// Set of regularized series sharing one grid, unique per key, iterated in
/// key order.
class SeriesStore {
public:
    using Map = std::map<SeriesKey, TimeSeries>;
    using const_iterator = Map::const_iterator;

    /// Throws Error{invalid_argument} when grid.interval is not positive.
    explicit SeriesStore(GridSpec grid);

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return series_.size(); }
    bool empty() const noexcept { return series_.empty(); }

    /// Throws Error{grid_mismatch} when the series grid differs from the
    /// store grid, Error{invalid_argument} on a duplicate key.
    void insert(TimeSeries series);

    /// nullptr when the key is absent.
    const TimeSeries* find(const SeriesKey& key) const noexcept;

    std::vector<SeriesKey> keys() const;

    const_iterator begin() const noexcept { return series_.begin(); }
    const_iterator end() const noexcept { return series_.end(); }

private:
    GridSpec grid_;
    Map series_;
};

}  // namespace rttkit
