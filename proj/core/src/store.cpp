#include "rttkit/store.hpp"

#include "rttkit/errors.hpp"

namespace rttkit {

SeriesStore::SeriesStore(GridSpec grid) : grid_(grid) {
    if (grid_.interval <= 0) throw Error(Errc::invalid_argument, "grid interval must be positive");
}

void SeriesStore::insert(TimeSeries series) {
    if (series.grid() != grid_)
        throw Error(Errc::grid_mismatch, "series grid does not match store grid");
    SeriesKey key = series.key();
    auto [it, inserted] = series_.emplace(std::move(key), std::move(series));
    if (!inserted)
        throw Error(Errc::invalid_argument, "duplicate series key: " + to_string(it->first));
}

const TimeSeries* SeriesStore::find(const SeriesKey& key) const noexcept {
    auto it = series_.find(key);
    return it == series_.end() ? nullptr : &it->second;
}

std::vector<SeriesKey> SeriesStore::keys() const {
    std::vector<SeriesKey> out;
    out.reserve(series_.size());
    for (const auto& [key, value] : series_) out.push_back(key);
    return out;
}

}  // namespace rttkit
