#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rttkit/ingest.hpp"

namespace rttkit {

/// Which series to request from a measurement service.
struct RemoteSelector {
    std::string monitor;
    std::uint32_t asn = 0;
    std::optional<int> ind;  ///< absent = both sides
};

/// Half-open UTC range [start, end) in seconds.
struct TimeRange {
    std::int64_t start = 0;
    std::int64_t end = 0;
};

struct FetchResult {
    std::vector<ProbeRecord> records;
    IngestStats stats;  ///< records_read counts every point the service sent
};

/// Fetches raw records over HTTP:
///
///   GET <endpoint>/query?monitor=<m>&asn=<n>[&ind=<i>]&start=<s>&end=<e>
///
/// and expects a JSON body of the form
///
///   {"series": [{"key": {"monitor": ..., "asn": ..., "ind": ...,
///                        "target": ..., "link": ...},
///                "points": [[<epoch_seconds>, <rtt_ms>], ...]}, ...]}
///
/// `endpoint` is the service base URL, e.g. "http://127.0.0.1:8080"; a path
/// prefix is kept ("http://host:1234/api" queries /api/query). Points are
/// converted to ProbeRecords under the same validity rules as parse_line;
/// invalid points (and every point of a series whose key is invalid) are
/// counted as rejected and skipped. Throws Error{network_error} when the
/// service cannot be reached and Error{bad_response} on a non-200 status or
/// a body that does not match the shape above.
FetchResult fetch_remote(const std::string& endpoint, const RemoteSelector& selector,
                         TimeRange range);

}  // namespace rttkit
