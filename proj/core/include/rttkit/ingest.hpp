#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "rttkit/series.hpp"
#include "rttkit/store.hpp"

namespace rttkit {

/// Header row of the record CSV format, also used for store persistence.
inline constexpr std::string_view kCsvHeader = "monitor,asn,ind,target,link,timestamp,rtt_ms";

/// Parses one line of the probe wire format:
///
///   rtt,monitor=<m>,asn=<n>,ind=<0|1>,target=<t>,link=<l> value=<float> <epoch_seconds>
///
/// The five tags may appear in any order; all are required. Throws
/// Error{malformed_line} when the structure is wrong (missing segment or tag,
/// duplicate or unknown tag, unparseable number) and Error{invalid_value}
/// when the structure is fine but a value is out of domain (rtt <= 0 or
/// non-finite, ind not 0/1, asn < 1, empty key field, negative timestamp).
ProbeRecord parse_line(std::string_view line);

struct LoadResult {
    std::vector<ProbeRecord> records;
    IngestStats stats;  ///< slots_filled and collisions stay 0 here
};

/// Reads a record CSV file. The first line must equal kCsvHeader exactly or
/// Error{bad_header} is thrown; an unreadable file throws Error{io_error}.
/// Rows that fail validation are counted in stats.records_rejected and
/// skipped; blank lines are ignored.
LoadResult load_csv(const std::filesystem::path& path);

/// Reads a file of probe wire-format lines (one record per line, blank lines
/// ignored). Unparseable lines are counted as rejected and skipped. Throws
/// Error{io_error} when the file cannot be read.
LoadResult load_lines(const std::filesystem::path& path);

struct RegularizeResult {
    SeriesStore store;
    IngestStats stats;
};

/// Buckets records onto the grid, one series per key. When several records
/// land in the same slot the one with the largest (timestamp, rtt) pair wins,
/// so the result does not depend on input order; each extra record on an
/// occupied slot counts as a collision. Invalid records and records outside
/// the grid are counted as rejected. Slots no record reached stay missing.
RegularizeResult regularize(std::span<const ProbeRecord> records, const GridSpec& grid);

/// Fills interior gaps of up to max_gap consecutive missing slots by linear
/// interpolation between the flanking present values. Longer gaps and gaps
/// touching either end of the series are left missing. Present values are
/// never altered, so the operation is idempotent.
TimeSeries interpolate_gaps(const TimeSeries& series, std::size_t max_gap = 6);

/// Writes the store as record CSV (the load_csv format): header, then one
/// row per present slot, sorted by (key, timestamp). Missing slots are
/// simply absent. RTT values use the shortest representation that parses
/// back to the identical double, so save/load round-trips are exact.
/// Throws Error{io_error} when the file cannot be written.
void save_store(const SeriesStore& store, const std::filesystem::path& path);

/// Rebuilds a store from a file written by save_store, on the given grid.
/// Rows from load_csv are regularized; Error{invalid_value} is thrown if any
/// row fails to parse or falls outside the grid (a store file is expected to
/// be exact, unlike arbitrary ingest input).
SeriesStore load_store(const std::filesystem::path& path, const GridSpec& grid);

/// Variant that reconstructs the grid from the data: epoch_start is the
/// multiple of `interval` nearest the earliest timestamp, and the grid ends
/// at the latest one. Leading/trailing all-missing slots are not recoverable
/// from the file; save/load round-trips are exact up to that trim.
SeriesStore load_store(const std::filesystem::path& path, std::int64_t interval);

}  // namespace rttkit
