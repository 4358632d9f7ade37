#include "config.hpp"

#include <charconv>
#include <fstream>
#include <string_view>

namespace rttkit::cli {

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    return text;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || end != value.data() + value.size())
        throw ConfigError("config key \"" + std::string(key) + "\" has unusable value \"" +
                          std::string(value) + "\"");
    return out;
}

}  // namespace

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    Config cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + " is not key=value");
        const std::string_view key = trim(text.substr(0, eq));
        const std::string_view value = trim(text.substr(eq + 1));
        if (key == "interval") cfg.interval = parse_number<std::int64_t>(key, value);
        else if (key == "min_overlap") cfg.min_overlap = parse_number<std::size_t>(key, value);
        else if (key == "max_gap") cfg.max_gap = parse_number<std::size_t>(key, value);
        else if (key == "season_len") cfg.season_len = parse_number<std::size_t>(key, value);
        else if (key == "grid_step") cfg.grid_step = parse_number<double>(key, value);
        else if (key == "discordance_hi") cfg.discordance_hi = parse_number<double>(key, value);
        else if (key == "discordance_lo") cfg.discordance_lo = parse_number<double>(key, value);
        else if (key == "split_fraction") cfg.split_fraction = parse_number<double>(key, value);
        else if (key == "store") cfg.store = std::string(value);
        else if (key == "endpoint") cfg.endpoint = std::string(value);
        else throw ConfigError("unknown config key \"" + std::string(key) + "\"");
    }
    return cfg;
}

}  // namespace rttkit::cli
