#include "rttkit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <utility>

#include "rttkit/errors.hpp"
#include "rttkit/format.hpp"

namespace rttkit {

namespace {

bool parse_u32(std::string_view text, std::uint32_t& out) {
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && end == text.data() + text.size();
}

bool parse_i64(std::string_view text, std::int64_t& out) {
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && end == text.data() + text.size();
}

bool parse_f64(std::string_view text, double& out) {
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && end == text.data() + text.size();
}

bool parse_ind(std::string_view text, int& out) {
    if (text == "0") out = 0;
    else if (text == "1") out = 1;
    else return false;
    return true;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = text.find(sep, pos);
        if (next == std::string_view::npos) {
            parts.push_back(text.substr(pos));
            return parts;
        }
        parts.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
}

/// CSV row in kCsvHeader order to a validated record; nullopt when any field
/// is unparseable or out of domain.
std::optional<ProbeRecord> record_from_fields(const std::vector<std::string_view>& fields) {
    if (fields.size() != 7) return std::nullopt;
    ProbeRecord rec;
    rec.key.monitor = std::string(fields[0]);
    if (!parse_u32(fields[1], rec.key.asn)) return std::nullopt;
    if (!parse_ind(fields[2], rec.key.ind)) return std::nullopt;
    rec.key.target = std::string(fields[3]);
    rec.key.link = std::string(fields[4]);
    if (!parse_i64(fields[5], rec.timestamp)) return std::nullopt;
    if (!parse_f64(fields[6], rec.rtt_ms)) return std::nullopt;
    if (!is_valid(rec)) return std::nullopt;
    return rec;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
    return in;
}

/// Largest q with q * d <= n, for d > 0.
std::int64_t floor_div(std::int64_t n, std::int64_t d) noexcept {
    std::int64_t q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
}

}  // namespace

ProbeRecord parse_line(std::string_view line) {
    const std::size_t sp1 = line.find(' ');
    const std::size_t sp2 = sp1 == std::string_view::npos ? sp1 : line.find(' ', sp1 + 1);
    if (sp2 == std::string_view::npos || line.find(' ', sp2 + 1) != std::string_view::npos)
        throw Error(Errc::malformed_line, "expected three space-separated segments");
    const std::string_view tags_seg = line.substr(0, sp1);
    const std::string_view value_seg = line.substr(sp1 + 1, sp2 - sp1 - 1);
    const std::string_view time_seg = line.substr(sp2 + 1);

    ProbeRecord rec;
    std::vector<std::string_view> tags = split(tags_seg, ',');
    if (tags[0] != "rtt") throw Error(Errc::malformed_line, "measurement must be \"rtt\"");
    bool seen[5] = {};  // monitor, asn, ind, target, link
    std::string_view asn_text, ind_text;
    for (std::size_t t = 1; t < tags.size(); ++t) {
        const std::size_t eq = tags[t].find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::malformed_line, "tag without '=': " + std::string(tags[t]));
        const std::string_view name = tags[t].substr(0, eq);
        const std::string_view value = tags[t].substr(eq + 1);
        std::size_t which;
        if (name == "monitor") { which = 0; rec.key.monitor = std::string(value); }
        else if (name == "asn") { which = 1; asn_text = value; }
        else if (name == "ind") { which = 2; ind_text = value; }
        else if (name == "target") { which = 3; rec.key.target = std::string(value); }
        else if (name == "link") { which = 4; rec.key.link = std::string(value); }
        else throw Error(Errc::malformed_line, "unknown tag: " + std::string(name));
        if (seen[which]) throw Error(Errc::malformed_line, "duplicate tag: " + std::string(name));
        seen[which] = true;
    }
    static constexpr const char* kTagNames[5] = {"monitor", "asn", "ind", "target", "link"};
    for (std::size_t t = 0; t < 5; ++t)
        if (!seen[t]) throw Error(Errc::malformed_line, std::string("missing tag: ") + kTagNames[t]);
    if (!parse_u32(asn_text, rec.key.asn))
        throw Error(Errc::invalid_value, "asn must be a positive integer");
    if (!parse_ind(ind_text, rec.key.ind))
        throw Error(Errc::invalid_value, "ind must be 0 or 1");

    if (value_seg.substr(0, 6) != "value=")
        throw Error(Errc::malformed_line, "second segment must be value=<float>");
    if (!parse_f64(value_seg.substr(6), rec.rtt_ms))
        throw Error(Errc::malformed_line, "unparseable value field");
    if (!parse_i64(time_seg, rec.timestamp))
        throw Error(Errc::malformed_line, "unparseable timestamp");

    if (rec.timestamp < 0) throw Error(Errc::invalid_value, "timestamp must not be negative");
    if (!std::isfinite(rec.rtt_ms) || rec.rtt_ms <= 0.0)
        throw Error(Errc::invalid_value, "rtt must be finite and positive");
    if (!is_valid(rec.key))
        throw Error(Errc::invalid_value, "invalid series key in tags");
    return rec;
}

LoadResult load_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw Error(Errc::bad_header, "expected header \"" + std::string(kCsvHeader) + "\" in " +
                                          path.string());
    LoadResult result;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++result.stats.records_read;
        std::optional<ProbeRecord> rec = record_from_fields(split(line, ','));
        if (rec) result.records.push_back(std::move(*rec));
        else ++result.stats.records_rejected;
    }
    return result;
}

LoadResult load_lines(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    LoadResult result;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++result.stats.records_read;
        try {
            result.records.push_back(parse_line(line));
        } catch (const Error&) {
            ++result.stats.records_rejected;
        }
    }
    return result;
}

RegularizeResult regularize(std::span<const ProbeRecord> records, const GridSpec& grid) {
    SeriesStore store{grid};
    IngestStats stats;
    stats.records_read = records.size();

    // Per key, per slot: the winning (timestamp, rtt) pair. Keeping the
    // lexicographic maximum makes the outcome independent of input order.
    using Cell = std::optional<std::pair<std::int64_t, double>>;
    std::map<SeriesKey, std::vector<Cell>> buckets;
    for (const ProbeRecord& rec : records) {
        if (!is_valid(rec)) {
            ++stats.records_rejected;
            continue;
        }
        const std::optional<std::size_t> slot = slot_of(rec.timestamp, grid);
        if (!slot) {
            ++stats.records_rejected;
            continue;
        }
        auto& cells = buckets.try_emplace(rec.key).first->second;
        if (cells.empty()) cells.resize(grid.length);
        Cell& cell = cells[*slot];
        const std::pair<std::int64_t, double> candidate{rec.timestamp, rec.rtt_ms};
        if (cell) {
            ++stats.collisions;
            if (candidate > *cell) *cell = candidate;
        } else {
            cell = candidate;
        }
    }
    for (auto& [key, cells] : buckets) {
        std::vector<Observation> values(grid.length);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!cells[i]) continue;
            values[i] = cells[i]->second;
            ++stats.slots_filled;
        }
        store.insert(TimeSeries(key, grid, std::move(values)));
    }
    return {std::move(store), stats};
}

TimeSeries interpolate_gaps(const TimeSeries& series, std::size_t max_gap) {
    std::vector<Observation> values = series.values();
    std::optional<std::size_t> prev;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i]) continue;
        if (prev) {
            const std::size_t gap = i - *prev - 1;
            if (gap >= 1 && gap <= max_gap) {
                const double a = *values[*prev];
                const double b = *values[i];
                for (std::size_t j = 1; j <= gap; ++j)
                    values[*prev + j] =
                        a + (b - a) * (static_cast<double>(j) / static_cast<double>(gap + 1));
            }
        }
        prev = i;
    }
    return TimeSeries(series.key(), series.grid(), std::move(values));
}

void save_store(const SeriesStore& store, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
    out << kCsvHeader << '\n';
    for (const auto& [key, series] : store) {
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (!series[i]) continue;
            out << key.monitor << ',' << key.asn << ',' << key.ind << ',' << key.target << ','
                << key.link << ',' << store.grid().slot_time(i) << ',' << format_double(*series[i])
                << '\n';
        }
    }
    out.flush();
    if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
}

namespace {

SeriesStore store_from_records(const LoadResult& loaded, const GridSpec& grid,
                               const std::filesystem::path& path) {
    if (loaded.stats.records_rejected > 0)
        throw Error(Errc::invalid_value, "store file has invalid rows: " + path.string());
    RegularizeResult reg = regularize(loaded.records, grid);
    if (reg.stats.records_rejected > 0)
        throw Error(Errc::invalid_value, "store file has rows outside its grid: " + path.string());
    if (reg.stats.collisions > 0)
        throw Error(Errc::invalid_value,
                    "store file has rows sharing one grid slot: " + path.string());
    return std::move(reg.store);
}

}  // namespace

SeriesStore load_store(const std::filesystem::path& path, const GridSpec& grid) {
    return store_from_records(load_csv(path), grid, path);
}

SeriesStore load_store(const std::filesystem::path& path, std::int64_t interval) {
    if (interval <= 0) throw Error(Errc::invalid_argument, "grid interval must be positive");
    LoadResult loaded = load_csv(path);
    GridSpec grid{0, interval, 0};
    if (!loaded.records.empty()) {
        std::int64_t lo = loaded.records.front().timestamp;
        std::int64_t hi = lo;
        for (const ProbeRecord& rec : loaded.records) {
            lo = std::min(lo, rec.timestamp);
            hi = std::max(hi, rec.timestamp);
        }
        grid.epoch_start = floor_div(lo + interval / 2, interval) * interval;
        grid.length = static_cast<std::size_t>(
            floor_div(hi - grid.epoch_start + interval / 2, interval) + 1);
    }
    return store_from_records(loaded, grid, path);
}

}  // namespace rttkit
