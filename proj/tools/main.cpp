#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "rttkit/correlate.hpp"
#include "rttkit/errors.hpp"
#include "rttkit/evaluate.hpp"
#include "rttkit/forecast.hpp"
#include "rttkit/format.hpp"
#include "rttkit/ingest.hpp"
#include "rttkit/remote.hpp"
#include "rttkit/synth.hpp"

namespace {

using namespace rttkit;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int usage_error(const std::string& message) {
    std::cerr << "rttkit: " << message << '\n';
    return kExitUsage;
}

std::int64_t floor_div(std::int64_t n, std::int64_t d) noexcept {
    std::int64_t q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
}

/// Grid spanning the records: slot 0 sits on the multiple of `interval`
/// nearest the earliest timestamp, the last slot on the latest one.
GridSpec infer_grid(const std::vector<ProbeRecord>& records, std::int64_t interval) {
    GridSpec grid{0, interval, 0};
    if (records.empty()) return grid;
    std::int64_t lo = records.front().timestamp;
    std::int64_t hi = lo;
    for (const ProbeRecord& rec : records) {
        lo = std::min(lo, rec.timestamp);
        hi = std::max(hi, rec.timestamp);
    }
    grid.epoch_start = floor_div(lo + interval / 2, interval) * interval;
    grid.length =
        static_cast<std::size_t>(floor_div(hi - grid.epoch_start + interval / 2, interval) + 1);
    return grid;
}

/// Reads one input file, dispatching on its first line: the record CSV
/// header selects CSV, anything else is treated as wire-format lines.
LoadResult load_input(const std::filesystem::path& path) {
    {
        std::ifstream probe(path);
        if (!probe) throw Error(Errc::io_error, "cannot read " + path.string());
        std::string first;
        std::getline(probe, first);
        if (first != kCsvHeader) return load_lines(path);
    }
    return load_csv(path);
}

// ---------------------------------------------------------------- ingest

struct IngestOpts {
    std::vector<std::string> files;
    std::string store;
    std::int64_t interval = 300;
    std::string remote;
    std::string monitor;
    std::uint32_t asn = 0;
    int ind = -1;  // -1 = both sides
    std::int64_t start = 0;
    std::int64_t end = 0;
};

int run_ingest(const IngestOpts& opts, const CLI::App& sub) {
    if (!opts.remote.empty() && !opts.files.empty())
        return usage_error("give input files or --remote, not both");
    if (opts.remote.empty() && opts.files.empty())
        return usage_error("nothing to ingest: give input files or --remote");
    if (opts.store.empty()) return usage_error("no store path: use --store or the config file");
    if (opts.interval <= 0) return usage_error("--interval must be positive");

    std::vector<ProbeRecord> records;
    IngestStats read_stats;
    if (!opts.remote.empty()) {
        if (opts.monitor.empty() || sub.count("--asn") == 0 || sub.count("--start") == 0 ||
            sub.count("--end") == 0)
            return usage_error("--remote needs --monitor, --asn, --start and --end");
        std::optional<int> ind;
        if (opts.ind >= 0) ind = opts.ind;
        FetchResult fetched = fetch_remote(opts.remote, {opts.monitor, opts.asn, ind},
                                           {opts.start, opts.end});
        records = std::move(fetched.records);
        read_stats = fetched.stats;
    } else {
        for (const std::string& file : opts.files) {
            LoadResult loaded = load_input(file);
            read_stats += loaded.stats;
            records.insert(records.end(), loaded.records.begin(), loaded.records.end());
        }
    }

    const GridSpec grid = infer_grid(records, opts.interval);
    RegularizeResult reg = regularize(records, grid);
    save_store(reg.store, opts.store);

    std::cout << "records_read=" << read_stats.records_read
              << " records_rejected=" << read_stats.records_rejected + reg.stats.records_rejected
              << " slots_filled=" << reg.stats.slots_filled
              << " collisions=" << reg.stats.collisions << " series=" << reg.store.size()
              << " slots=" << grid.length << '\n';
    return kExitOk;
}

// ------------------------------------------------------------- correlate

struct CorrelateOpts {
    std::string store;
    std::int64_t interval = 300;
    std::string monitor;
    std::uint32_t asn = 0;
    std::uint32_t asn_b = 0;
    int ind = 0;
    std::size_t min_overlap = 288;
    std::string report;
    double hi = 0.5;
    double lo = 0.2;
    std::string out;
};

int run_correlate(const CorrelateOpts& opts, const CLI::App& sub) {
    if (opts.store.empty()) return usage_error("no store path: use --store or the config file");
    const bool cross = sub.count("--cross-asn") > 0 && opts.asn_b != opts.asn;
    if (!opts.report.empty() && opts.report != "discordance")
        return usage_error("unknown report type \"" + opts.report + "\"");
    if (!opts.report.empty() && cross)
        return usage_error("--report discordance needs a single group, not --cross-asn");

    const SeriesStore store = load_store(opts.store, opts.interval);
    const CorrelationMatrix matrix =
        cross ? cross_asn_correlation(store, opts.monitor, opts.asn, opts.asn_b, opts.ind,
                                      opts.min_overlap, 0)
              : correlation_matrix(group_series(store, {opts.monitor, opts.asn, opts.ind}),
                                   opts.min_overlap, 0);

    if (opts.out.empty()) {
        write_matrix_csv(matrix, std::cout);
    } else {
        std::ofstream file(opts.out);
        if (!file) throw Error(Errc::io_error, "cannot write " + opts.out);
        write_matrix_csv(matrix, file);
    }
    const std::optional<double> mean = mean_pairwise(matrix);
    std::cout << "mean_pairwise=" << (mean ? format_fixed6(*mean) : "undefined")
              << " pairs=" << defined_pair_count(matrix) << '\n';

    if (opts.report == "discordance") {
        for (const DiscordantPair& pair : discordance_report(matrix, opts.hi, opts.lo)) {
            std::cout << "discordant," << format_fixed6(pair.rho) << ','
                      << to_string(matrix.row_keys()[pair.i]) << ','
                      << to_string(matrix.row_keys()[pair.j]) << '\n';
        }
    }
    return kExitOk;
}

// -------------------------------------------------------------- forecast

struct SeriesPrep {
    std::vector<double> values;
    std::size_t slot_offset = 0;
};

/// Shared forecast/evaluate front end: look up the key, close small gaps,
/// trim the missing edges.
TimeSeries prepared_series(const SeriesStore& store, const std::string& key_text,
                           std::size_t max_gap) {
    const std::optional<SeriesKey> key = key_from_string(key_text);
    if (!key)
        throw Error(Errc::invalid_value,
                    "key must be \"monitor asn ind target link\", got \"" + key_text + "\"");
    const TimeSeries* series = store.find(*key);
    if (!series) throw Error(Errc::invalid_value, "key not found in store: " + key_text);
    const TimeSeries filled = interpolate_gaps(*series, max_gap);
    const auto [first, last] = present_extent(filled);
    if (first == last)
        throw Error(Errc::contains_missing, "series has no present slots: " + key_text);
    return slice(filled, first, last - first);
}

struct ForecastOpts {
    std::string store;
    std::int64_t interval = 300;
    std::string key;
    std::size_t season_len = 288;
    std::size_t horizon = 0;
    bool do_fit = false;
    std::string params;
    double grid_step = 0.05;
    std::size_t max_gap = 6;
    std::string out = "forecast.csv";
};

int run_forecast(const ForecastOpts& opts) {
    if (opts.store.empty()) return usage_error("no store path: use --store or the config file");
    if (opts.do_fit == !opts.params.empty())
        return usage_error("choose exactly one of --fit or --params a,b,g");
    HwParams params{0.0, 0.0, 0.0, opts.season_len};
    if (!opts.params.empty()) {
        const std::string& p = opts.params;
        const std::size_t c1 = p.find(',');
        const std::size_t c2 = c1 == std::string::npos ? c1 : p.find(',', c1 + 1);
        const auto parse_at = [&](std::size_t begin, std::size_t end, double& out) {
            auto [ptr, ec] = std::from_chars(p.data() + begin, p.data() + end, out);
            return ec == std::errc{} && ptr == p.data() + end;
        };
        if (c2 == std::string::npos || !parse_at(0, c1, params.alpha) ||
            !parse_at(c1 + 1, c2, params.beta) || !parse_at(c2 + 1, p.size(), params.gamma))
            return usage_error("--params expects three numbers a,b,g");
    }

    const SeriesStore store = load_store(opts.store, opts.interval);
    const TimeSeries trimmed = prepared_series(store, opts.key, opts.max_gap);
    std::vector<double> values;
    try {
        values = dense_values(trimmed);
    } catch (const Error&) {
        throw Error(Errc::contains_missing,
                    "series still has gaps longer than max_gap=" + std::to_string(opts.max_gap) +
                        "; raise --max-gap or ingest denser data");
    }

    ForecastResult forecast;
    if (opts.do_fit) {
        FitResult fitted = fit(values, opts.season_len, opts.horizon, opts.grid_step, 0);
        params = fitted.params;
        forecast = std::move(fitted.forecast);
    } else {
        forecast = hw(values, params, opts.horizon);
    }

    std::ofstream file(opts.out);
    if (!file) throw Error(Errc::io_error, "cannot write " + opts.out);
    const auto slot_offset = static_cast<std::size_t>(
        (trimmed.grid().epoch_start - store.grid().epoch_start) / store.grid().interval);
    write_forecast_csv(file, store.grid(), slot_offset, values, forecast);

    std::cout << "alpha=" << format_double(params.alpha) << " beta=" << format_double(params.beta)
              << " gamma=" << format_double(params.gamma) << " season_len=" << params.season_len
              << " mse=" << format_double(forecast.mse()) << '\n';
    return kExitOk;
}

// -------------------------------------------------------------- evaluate

struct EvaluateOpts {
    std::string store;
    std::int64_t interval = 300;
    std::string key;
    double split = 0.8;
    std::size_t season_len = 288;
    double grid_step = 0.05;
    std::size_t max_gap = 6;
};

int run_evaluate(const EvaluateOpts& opts) {
    if (opts.store.empty()) return usage_error("no store path: use --store or the config file");
    const SeriesStore store = load_store(opts.store, opts.interval);
    const TimeSeries trimmed = prepared_series(store, opts.key, opts.max_gap);
    const HoldoutResult result =
        holdout_eval(trimmed, opts.split, opts.season_len, opts.grid_step, 0);

    write_report_csv(result.report, std::cout);
    std::cout << "fitted alpha=" << format_double(result.params.alpha)
              << " beta=" << format_double(result.params.beta)
              << " gamma=" << format_double(result.params.gamma)
              << " season_len=" << result.params.season_len << '\n';
    write_report_text(result.report, std::cout);
    return kExitOk;
}

// ----------------------------------------------------------------- synth

struct SynthFile {
    SynthSpec spec;
    std::string monitor = "syn";
    std::uint32_t asn = 1;
    int ind = 0;
    std::string target_prefix = "t";
    std::string link_prefix = "l";
    std::size_t count = 1;
};

std::string_view trim_view(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    return text;
}

template <typename T>
T spec_number(std::string_view key, std::string_view value) {
    T out{};
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || end != value.data() + value.size())
        throw Error(Errc::invalid_spec, "spec key \"" + std::string(key) +
                                            "\" has unusable value \"" + std::string(value) + "\"");
    return out;
}

/// Same flat key=value shape as the config file, for generator recipes.
SynthFile load_synth_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read spec file " + path);
    SynthFile file;
    SynthSpec& s = file.spec;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim_view(line);
        if (text.empty() || text.front() == '#') continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::invalid_spec,
                        "spec line " + std::to_string(line_no) + " is not key=value");
        const std::string_view key = trim_view(text.substr(0, eq));
        const std::string_view value = trim_view(text.substr(eq + 1));
        if (key == "base_rtt") s.base_rtt = spec_number<double>(key, value);
        else if (key == "daily_amp") s.daily_amp = spec_number<double>(key, value);
        else if (key == "weekend_boost") s.weekend_boost = spec_number<double>(key, value);
        else if (key == "noise_sigma") s.noise_sigma = spec_number<double>(key, value);
        else if (key == "episode_rate") s.episode_rate = spec_number<double>(key, value);
        else if (key == "episode_height") s.episode_height = spec_number<double>(key, value);
        else if (key == "gap_rate") s.gap_rate = spec_number<double>(key, value);
        else if (key == "gap_len") s.gap_len = spec_number<std::size_t>(key, value);
        else if (key == "days") s.days = spec_number<std::size_t>(key, value);
        else if (key == "seed") s.seed = spec_number<std::uint64_t>(key, value);
        else if (key == "monitor") file.monitor = std::string(value);
        else if (key == "asn") file.asn = spec_number<std::uint32_t>(key, value);
        else if (key == "ind") file.ind = spec_number<int>(key, value);
        else if (key == "target_prefix") file.target_prefix = std::string(value);
        else if (key == "link_prefix") file.link_prefix = std::string(value);
        else if (key == "count") file.count = spec_number<std::size_t>(key, value);
        else throw Error(Errc::invalid_spec, "unknown spec key \"" + std::string(key) + "\"");
    }
    return file;
}

struct SynthOpts {
    std::string spec_path;
    std::string out;
};

int run_synth(const SynthOpts& opts) {
    if (opts.out.empty()) return usage_error("no store path: use --out or the config file");
    const SynthFile file = load_synth_file(opts.spec_path);
    validate(file.spec);
    if (file.count == 0) throw Error(Errc::invalid_spec, "count must be at least 1");

    SeriesStore store{GridSpec{0, 300, file.spec.days * 288}};
    for (std::size_t i = 0; i < file.count; ++i) {
        const SeriesKey key{file.monitor, file.asn, file.ind,
                            file.target_prefix + std::to_string(i),
                            file.link_prefix + std::to_string(i)};
        store.insert(generate(file.spec, key));
    }
    save_store(store, opts.out);
    std::cout << "series=" << store.size() << " slots=" << store.grid().length
              << " store=" << opts.out << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    rttkit::cli::Config cfg;
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string_view arg = argv[i];
            if (arg == "--config") {
                if (i + 1 >= argc) throw rttkit::cli::ConfigError("--config needs a file path");
                cfg = rttkit::cli::load_config(argv[i + 1]);
                break;
            }
            if (arg.rfind("--config=", 0) == 0) {
                cfg = rttkit::cli::load_config(std::string(arg.substr(9)));
                break;
            }
        }
    } catch (const rttkit::cli::ConfigError& e) {
        return usage_error(e.what());
    }

    CLI::App app{"RTT time-series toolkit: ingest probe data, correlate links, forecast and "
                 "evaluate, synthesize test data"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value file with defaults for the options");

    IngestOpts ingest_opts;
    ingest_opts.store = cfg.store;
    ingest_opts.interval = cfg.interval;
    ingest_opts.remote = "";
    auto* ingest_cmd =
        app.add_subcommand("ingest", "parse raw records and persist a grid-aligned store");
    ingest_cmd->add_option("files", ingest_opts.files,
                           "record CSV or wire-format line files (auto-detected)");
    ingest_cmd->add_option("--store", ingest_opts.store, "output store file");
    ingest_cmd->add_option("--interval", ingest_opts.interval, "grid slot width in seconds");
    ingest_cmd->add_option("--remote", ingest_opts.remote, "fetch from this service base URL");
    ingest_cmd->add_option("--monitor", ingest_opts.monitor, "remote: monitor to query");
    ingest_cmd->add_option("--asn", ingest_opts.asn, "remote: neighbor network to query");
    ingest_cmd->add_option("--ind", ingest_opts.ind, "remote: 0 near side, 1 far side (default both)");
    ingest_cmd->add_option("--start", ingest_opts.start, "remote: range start, UTC seconds");
    ingest_cmd->add_option("--end", ingest_opts.end, "remote: range end, UTC seconds, exclusive");

    CorrelateOpts correlate_opts;
    correlate_opts.store = cfg.store;
    correlate_opts.interval = cfg.interval;
    correlate_opts.min_overlap = cfg.min_overlap;
    correlate_opts.hi = cfg.discordance_hi;
    correlate_opts.lo = cfg.discordance_lo;
    auto* correlate_cmd =
        app.add_subcommand("correlate", "pairwise link correlations within a group");
    correlate_cmd->add_option("--store", correlate_opts.store, "store file to read");
    correlate_cmd->add_option("--monitor", correlate_opts.monitor, "group monitor")->required();
    correlate_cmd->add_option("--asn", correlate_opts.asn, "group neighbor network")->required();
    correlate_cmd->add_option("--ind", correlate_opts.ind, "0 near side, 1 far side");
    correlate_cmd->add_option("--cross-asn", correlate_opts.asn_b,
                              "correlate the group against this second network instead");
    correlate_cmd->add_option("--min-overlap", correlate_opts.min_overlap,
                              "slots both series must share");
    correlate_cmd->add_option("--report", correlate_opts.report,
                              "extra report to print (discordance)");
    correlate_cmd->add_option("--hi", correlate_opts.hi, "discordance: coupled-pair threshold");
    correlate_cmd->add_option("--lo", correlate_opts.lo, "discordance: isolation threshold");
    correlate_cmd->add_option("--out", correlate_opts.out,
                              "write the matrix CSV here instead of stdout");

    ForecastOpts forecast_opts;
    forecast_opts.store = cfg.store;
    forecast_opts.interval = cfg.interval;
    forecast_opts.season_len = cfg.season_len;
    forecast_opts.grid_step = cfg.grid_step;
    forecast_opts.max_gap = cfg.max_gap;
    auto* forecast_cmd =
        app.add_subcommand("forecast", "smooth one series and write its forecast CSV");
    forecast_cmd->add_option("--store", forecast_opts.store, "store file to read");
    forecast_cmd->add_option("--key", forecast_opts.key, "series key \"monitor asn ind target link\"")
        ->required();
    forecast_cmd->add_option("--season-len", forecast_opts.season_len, "season length in slots");
    forecast_cmd->add_option("--horizon", forecast_opts.horizon, "slots to forecast past the end")
        ->required();
    forecast_cmd->add_flag("--fit", forecast_opts.do_fit, "pick smoothing weights by grid search");
    forecast_cmd->add_option("--params", forecast_opts.params, "fixed smoothing weights a,b,g");
    forecast_cmd->add_option("--grid-step", forecast_opts.grid_step, "--fit grid spacing");
    forecast_cmd->add_option("--max-gap", forecast_opts.max_gap,
                             "longest missing run to interpolate, in slots");
    forecast_cmd->add_option("--out", forecast_opts.out, "forecast CSV path");

    EvaluateOpts evaluate_opts;
    evaluate_opts.store = cfg.store;
    evaluate_opts.interval = cfg.interval;
    evaluate_opts.split = cfg.split_fraction;
    evaluate_opts.season_len = cfg.season_len;
    evaluate_opts.grid_step = cfg.grid_step;
    evaluate_opts.max_gap = cfg.max_gap;
    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "train/holdout forecast quality for one series");
    evaluate_cmd->add_option("--store", evaluate_opts.store, "store file to read");
    evaluate_cmd->add_option("--key", evaluate_opts.key, "series key \"monitor asn ind target link\"")
        ->required();
    evaluate_cmd->add_option("--split", evaluate_opts.split, "training fraction in (0, 1)");
    evaluate_cmd->add_option("--season-len", evaluate_opts.season_len, "season length in slots");
    evaluate_cmd->add_option("--grid-step", evaluate_opts.grid_step, "fit grid spacing");
    evaluate_cmd->add_option("--max-gap", evaluate_opts.max_gap,
                             "longest missing run to interpolate, in slots");

    SynthOpts synth_opts;
    synth_opts.out = cfg.store;
    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic series into a store");
    synth_cmd->add_option("--spec", synth_opts.spec_path, "flat key=value generator recipe")
        ->required();
    synth_cmd->add_option("--out", synth_opts.out, "output store file");

    int rc = kExitOk;
    ingest_cmd->callback([&] { rc = run_ingest(ingest_opts, *ingest_cmd); });
    correlate_cmd->callback([&] { rc = run_correlate(correlate_opts, *correlate_cmd); });
    forecast_cmd->callback([&] { rc = run_forecast(forecast_opts); });
    evaluate_cmd->callback([&] { rc = run_evaluate(evaluate_opts); });
    synth_cmd->callback([&] { rc = run_synth(synth_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "rttkit: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "rttkit: " << e.what() << '\n';
        return kExitRuntime;
    }
    return rc;
}
