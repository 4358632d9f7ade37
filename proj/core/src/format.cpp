#include "rttkit/format.hpp"

#include <charconv>
#include <cstdio>

namespace rttkit {

std::string format_double(double value) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;  // 32 chars always suffice for the shortest form
    return std::string(buf, end);
}

std::string format_fixed6(double value) {
    char buf[64];
    int n = std::snprintf(buf, sizeof(buf), "%.6f", value);
    return std::string(buf, buf + (n < 0 ? 0 : n));
}

}  // namespace rttkit
