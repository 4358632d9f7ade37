#pragma once

#include <stdexcept>
#include <string>

namespace rttkit {

/// Failure categories used across the library. Operations that treat a
/// condition as a normal return (an empty group, an out-of-range slot)
/// do not throw; everything else raises Error with one of these codes.
enum class Errc {
    // parsing / files
    malformed_line,
    invalid_value,
    bad_header,
    io_error,
    // remote fetch
    network_error,
    bad_response,
    // correlation
    grid_mismatch,
    insufficient_overlap,
    zero_variance,
    // smoothing
    empty_series,
    contains_missing,
    series_too_short,
    bad_season,
    // scoring
    length_mismatch,
    no_scorable_slots,
    // synthesis
    invalid_spec,
    // generic precondition violation
    invalid_argument,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace rttkit
