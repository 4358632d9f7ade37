#pragma once

#include <string>

namespace rttkit {

/// Shortest decimal string that parses back to the identical double
/// ("23.5", "1e-09"). Used wherever exact round-tripping matters.
std::string format_double(double value);

/// Fixed 6 fractional digits ("0.300000"). Used in report and matrix CSVs.
std::string format_fixed6(double value);

}  // namespace rttkit
