#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rttkit::cli {

/// Defaults shared by the subcommands, overridable per run by flags.
struct Config {
    std::int64_t interval = 300;      ///< grid slot width, seconds
    std::size_t min_overlap = 288;    ///< correlation overlap floor
    std::size_t max_gap = 6;          ///< interpolation limit, slots
    std::size_t season_len = 288;     ///< smoothing season, slots
    double grid_step = 0.05;          ///< parameter grid spacing
    double discordance_hi = 0.5;      ///< coupled-pair threshold
    double discordance_lo = 0.2;      ///< isolation threshold
    double split_fraction = 0.8;      ///< evaluation train share
    std::string store;                ///< default store path
    std::string endpoint;             ///< default remote base URL
};

/// Raised for config files that cannot be used: unreadable, unknown key,
/// or a value that does not parse. Treated as a usage error by main().
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads a flat "key = value" file ('#' starts a comment, blank lines
/// ignored) over the defaults above.
Config load_config(const std::string& path);

}  // namespace rttkit::cli
