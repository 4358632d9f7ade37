#include "rttkit/errors.hpp"

namespace rttkit {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::malformed_line: return "malformed line";
        case Errc::invalid_value: return "invalid value";
        case Errc::bad_header: return "bad header";
        case Errc::io_error: return "io error";
        case Errc::network_error: return "network error";
        case Errc::bad_response: return "bad response";
        case Errc::grid_mismatch: return "grid mismatch";
        case Errc::insufficient_overlap: return "insufficient overlap";
        case Errc::zero_variance: return "zero variance";
        case Errc::empty_series: return "empty series";
        case Errc::contains_missing: return "series contains missing values";
        case Errc::series_too_short: return "series too short";
        case Errc::bad_season: return "bad season length";
        case Errc::length_mismatch: return "length mismatch";
        case Errc::no_scorable_slots: return "no scorable slots";
        case Errc::invalid_spec: return "invalid spec";
        case Errc::invalid_argument: return "invalid argument";
    }
    return "unknown error";
}

}  // namespace rttkit
