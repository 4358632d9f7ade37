#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "rttkit/ingest.hpp"

using namespace rttkit;
using testutil::code_of;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("rttkit_test_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("parse_line reads the probe wire format") {
    const ProbeRecord rec =
        parse_line("rtt,monitor=bed-us,asn=15169,ind=0,target=10.0.0.1,link=L1 value=23.5 1714003200");
    CHECK(rec.key.monitor == "bed-us");
    CHECK(rec.key.asn == 15169);
    CHECK(rec.key.ind == 0);
    CHECK(rec.key.target == "10.0.0.1");
    CHECK(rec.key.link == "L1");
    CHECK(rec.rtt_ms == 23.5);
    CHECK(rec.timestamp == 1714003200);

    SUBCASE("tags may come in any order") {
        const ProbeRecord shuffled =
            parse_line("rtt,link=L1,ind=0,asn=15169,target=10.0.0.1,monitor=bed-us value=23.5 1714003200");
        CHECK(shuffled == rec);
    }
}

TEST_CASE("parse_line rejects structural damage as malformed") {
    const auto malformed = [](const char* line) {
        return code_of([&] { parse_line(line); }) == Errc::malformed_line;
    };
    CHECK(malformed("rtt,monitor=m,asn=1,ind=0,target=t,link=l value=1.0"));        // two segments
    CHECK(malformed("rtt,monitor=m,asn=1,ind=0,target=t,link=l value=1.0 5 extra"));
    CHECK(malformed("rtt,monitor=m,asn=1,ind=0,target=t value=1.0 5"));             // missing link
    CHECK(malformed("rtt,monitor=m,asn=1,ind=0,target=t,link=l,link=l value=1.0 5"));
    CHECK(malformed("rtt,monitor=m,asn=1,ind=0,target=t,link=l,color=red value=1.0 5"));
    CHECK(malformed("cpu,monitor=m,asn=1,ind=0,target=t,link=l value=1.0 5"));
    CHECK(malformed("rtt,monitor,asn=1,ind=0,target=t,link=l value=1.0 5"));        // tag without =
    CHECK(malformed("rtt,monitor=m,asn=1,ind=0,target=t,link=l value=abc 5"));
    CHECK(malformed("rtt,monitor=m,asn=1,ind=0,target=t,link=l 1.0 5"));            // no value=
    CHECK(malformed("rtt,monitor=m,asn=1,ind=0,target=t,link=l value=1.0 later"));
}

TEST_CASE("parse_line rejects out-of-domain values as invalid") {
    const auto invalid = [](const char* line) {
        return code_of([&] { parse_line(line); }) == Errc::invalid_value;
    };
    CHECK(invalid("rtt,monitor=m,asn=1,ind=2,target=t,link=l value=1.0 5"));
    CHECK(invalid("rtt,monitor=m,asn=1,ind=0,target=t,link=l value=-3 5"));
    CHECK(invalid("rtt,monitor=m,asn=1,ind=0,target=t,link=l value=0 5"));
    CHECK(invalid("rtt,monitor=m,asn=1,ind=0,target=t,link=l value=inf 5"));
    CHECK(invalid("rtt,monitor=m,asn=0,ind=0,target=t,link=l value=1.0 5"));
    CHECK(invalid("rtt,monitor=m,asn=abc,ind=0,target=t,link=l value=1.0 5"));
    CHECK(invalid("rtt,monitor=,asn=1,ind=0,target=t,link=l value=1.0 5"));
    CHECK(invalid("rtt,monitor=m,asn=1,ind=0,target=t,link=l value=1.0 -5"));
}

TEST_CASE("load_csv reads valid rows and counts the rest") {
    const auto path = temp_file("records.csv");
    write_file(path,
               "monitor,asn,ind,target,link,timestamp,rtt_ms\n"
               "bed-us,15169,0,10.0.0.1,L1,0,10.5\n"
               "bed-us,15169,0,10.0.0.1,L1,300,11.5\n"
               "bed-us,15169,0,10.0.0.2,L2,300,20.25\n");
    const LoadResult ok = load_csv(path);
    CHECK(ok.records.size() == 3);
    CHECK(ok.stats.records_read == 3);
    CHECK(ok.stats.records_rejected == 0);
    CHECK(ok.records[2].rtt_ms == 20.25);

    SUBCASE("a row with an unusable rtt is rejected, not fatal") {
        write_file(path,
                   "monitor,asn,ind,target,link,timestamp,rtt_ms\n"
                   "bed-us,15169,0,10.0.0.1,L1,0,10.5\n"
                   "bed-us,15169,0,10.0.0.1,L1,300,abc\n"
                   "bed-us,15169,0,10.0.0.2,L2,300,20.25\n");
        const LoadResult mixed = load_csv(path);
        CHECK(mixed.records.size() == 2);
        CHECK(mixed.stats.records_read == 3);
        CHECK(mixed.stats.records_rejected == 1);
    }

    SUBCASE("a header-only file is an empty result") {
        write_file(path, "monitor,asn,ind,target,link,timestamp,rtt_ms\n");
        const LoadResult empty = load_csv(path);
        CHECK(empty.records.empty());
        CHECK(empty.stats.records_read == 0);
    }

    SUBCASE("a wrong or absent header is fatal") {
        write_file(path, "time,rtt\n1,2\n");
        CHECK(code_of([&] { load_csv(path); }) == Errc::bad_header);
        write_file(path, "");
        CHECK(code_of([&] { load_csv(path); }) == Errc::bad_header);
    }

    SUBCASE("an unreadable file is an io error") {
        CHECK(code_of([] { load_csv("/nonexistent/nowhere.csv"); }) == Errc::io_error);
    }
}

TEST_CASE("load_lines wraps parse_line per line") {
    const auto path = temp_file("records.lines");
    write_file(path,
               "rtt,monitor=m,asn=1,ind=0,target=t,link=l value=10 0\n"
               "\n"
               "garbage\n"
               "rtt,monitor=m,asn=1,ind=0,target=t,link=l value=11 300\n");
    const LoadResult result = load_lines(path);
    CHECK(result.records.size() == 2);
    CHECK(result.stats.records_read == 3);  // blank lines are not records
    CHECK(result.stats.records_rejected == 1);
}

TEST_CASE("regularize buckets records onto the grid") {
    const GridSpec grid{0, 300, 4};
    const SeriesKey key = testutil::key();
    const std::vector<ProbeRecord> records{
        {key, 0, 10.0}, {key, 300, 20.0}, {key, 900, 40.0}};
    const RegularizeResult result = regularize(records, grid);

    REQUIRE(result.store.size() == 1);
    const TimeSeries* series = result.store.find(key);
    REQUIRE(series != nullptr);
    CHECK((*series)[0] == 10.0);
    CHECK((*series)[1] == 20.0);
    CHECK_FALSE((*series)[2].has_value());
    CHECK((*series)[3] == 40.0);
    CHECK(result.stats.records_read == 3);
    CHECK(result.stats.slots_filled == 3);
    CHECK(result.stats.collisions == 0);
}

TEST_CASE("regularize resolves slot collisions by the larger (timestamp, rtt)") {
    const GridSpec grid{0, 300, 2};
    const SeriesKey key = testutil::key();

    SUBCASE("later timestamp wins regardless of value") {
        const std::vector<ProbeRecord> records{{key, 310, 5.0}, {key, 300, 99.0}};
        const RegularizeResult result = regularize(records, grid);
        CHECK((*result.store.find(key))[1] == 5.0);
        CHECK(result.stats.collisions == 1);
        CHECK(result.stats.slots_filled == 1);
    }
    SUBCASE("equal timestamps fall back to the larger value") {
        const std::vector<ProbeRecord> records{{key, 300, 7.0}, {key, 300, 9.0}};
        CHECK((*regularize(records, grid).store.find(key))[1] == 9.0);
    }
}

TEST_CASE("regularize rejects invalid and out-of-grid records") {
    const GridSpec grid{0, 300, 2};
    const SeriesKey key = testutil::key();
    std::vector<ProbeRecord> records{
        {key, 0, 10.0},
        {key, 5000, 10.0},         // beyond the grid
        {key, 100, -1.0},          // invalid rtt, never parsed
        {SeriesKey{"m", 0, 0, "t", "l"}, 0, 1.0},  // invalid key
    };
    const RegularizeResult result = regularize(records, grid);
    CHECK(result.stats.records_read == 4);
    CHECK(result.stats.records_rejected == 3);
    CHECK(result.stats.slots_filled == 1);
    CHECK(result.store.size() == 1);  // the invalid key contributes no series

    SUBCASE("no records means an empty store") {
        CHECK(regularize({}, grid).store.empty());
    }
}

TEST_CASE("regularize does not depend on input order") {
    std::mt19937_64 rng(99);
    const GridSpec grid{0, 300, 50};
    std::vector<ProbeRecord> records;
    for (int i = 0; i < 200; ++i) {
        const SeriesKey key = testutil::key("t" + std::to_string(i % 3));
        const std::int64_t ts = static_cast<std::int64_t>(rng() % 15000);
        const double rtt = 1.0 + static_cast<double>(rng() % 1000) / 10.0;
        records.push_back({key, ts, rtt});
    }
    const RegularizeResult reference = regularize(records, grid);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
        std::shuffle(records.begin(), records.end(), rng);
        const RegularizeResult shuffled = regularize(records, grid);
        CHECK(shuffled.stats == reference.stats);
        REQUIRE(shuffled.store.size() == reference.store.size());
        for (const auto& [key, series] : reference.store)
            CHECK(shuffled.store.find(key)->values() == series.values());
    }
}

TEST_CASE("interpolate_gaps fills short interior gaps linearly") {
    const TimeSeries one = interpolate_gaps(testutil::series({10.0, kMissing, 20.0}), 1);
    CHECK(one[1] == 15.0);

    SUBCASE("a gap longer than max_gap stays missing") {
        const TimeSeries two = interpolate_gaps(testutil::series({10.0, kMissing, kMissing, 40.0}), 1);
        CHECK_FALSE(two[1].has_value());
        CHECK_FALSE(two[2].has_value());
    }
    SUBCASE("a gap of exactly max_gap is filled") {
        const TimeSeries two = interpolate_gaps(testutil::series({10.0, kMissing, kMissing, 40.0}), 2);
        CHECK(two[1] == 20.0);
        CHECK(two[2] == 30.0);
    }
    SUBCASE("edge gaps have no flanking values and stay missing") {
        const TimeSeries edges =
            interpolate_gaps(testutil::series({kMissing, 10.0, kMissing, 20.0, kMissing}), 6);
        CHECK_FALSE(edges[0].has_value());
        CHECK(edges[2] == 15.0);
        CHECK_FALSE(edges[4].has_value());
    }
    SUBCASE("max_gap zero changes nothing") {
        const TimeSeries same = interpolate_gaps(testutil::series({10.0, kMissing, 20.0}), 0);
        CHECK_FALSE(same[1].has_value());
    }
}

TEST_CASE("interpolate_gaps never alters present values and is idempotent") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Observation> values(40);
        for (auto& v : values)
            if (rng() % 3 != 0) v = 1.0 + static_cast<double>(rng() % 500) / 7.0;
        const TimeSeries raw = testutil::series(values);
        const std::size_t max_gap = rng() % 5;
        const TimeSeries filled = interpolate_gaps(raw, max_gap);
        for (std::size_t i = 0; i < raw.size(); ++i)
            if (raw[i]) CHECK(filled[i] == raw[i]);
        const TimeSeries again = interpolate_gaps(filled, max_gap);
        CHECK(again.values() == filled.values());
    }
}

TEST_CASE("save_store writes the record CSV sorted by key and slot") {
    SeriesStore store{GridSpec{0, 300, 3}};
    store.insert(testutil::series({23.5, kMissing, 0.25}, testutil::key("10.0.0.1", "L1")));
    store.insert(testutil::series({kMissing, 7.125, kMissing}, testutil::key("10.0.0.2", "L2")));
    const auto path = temp_file("store.csv");
    save_store(store, path);
    CHECK(read_file(path) ==
          "monitor,asn,ind,target,link,timestamp,rtt_ms\n"
          "bed-us,15169,0,10.0.0.1,L1,0,23.5\n"
          "bed-us,15169,0,10.0.0.1,L1,600,0.25\n"
          "bed-us,15169,0,10.0.0.2,L2,300,7.125\n");
}

TEST_CASE("store round-trips exactly through save and load") {
    std::mt19937_64 rng(777);
    const GridSpec grid{18000, 300, 30};
    SeriesStore store{grid};
    for (int s = 0; s < 3; ++s) {
        std::vector<Observation> values(grid.length);
        for (auto& v : values)
            if (rng() % 4 != 0)
                v = 0.1 + static_cast<double>(rng()) / static_cast<double>(rng.max()) * 200.0;
        values.front() = 50.0;  // keep the grid edges recoverable
        values.back() = 60.0;
        store.insert(testutil::series(values, testutil::key("t" + std::to_string(s)), grid.epoch_start));
    }
    const auto path = temp_file("roundtrip.csv");
    save_store(store, path);

    SUBCASE("with the original grid") {
        const SeriesStore back = load_store(path, grid);
        REQUIRE(back.size() == store.size());
        for (const auto& [key, series] : store)
            CHECK(back.find(key)->values() == series.values());
    }
    SUBCASE("with the grid inferred from the data") {
        const SeriesStore back = load_store(path, 300);
        CHECK(back.grid() == grid);
        for (const auto& [key, series] : store)
            CHECK(back.find(key)->values() == series.values());
    }
}

TEST_CASE("load_store rejects files that do not look like store output") {
    const auto path = temp_file("badstore.csv");
    write_file(path,
               "monitor,asn,ind,target,link,timestamp,rtt_ms\n"
               "bed-us,15169,0,10.0.0.1,L1,0,abc\n");
    CHECK(code_of([&] { load_store(path, GridSpec{0, 300, 4}); }) == Errc::invalid_value);

    write_file(path,
               "monitor,asn,ind,target,link,timestamp,rtt_ms\n"
               "bed-us,15169,0,10.0.0.1,L1,9000,10.0\n");
    CHECK(code_of([&] { load_store(path, GridSpec{0, 300, 4}); }) == Errc::invalid_value);

    write_file(path,
               "monitor,asn,ind,target,link,timestamp,rtt_ms\n"
               "bed-us,15169,0,10.0.0.1,L1,0,10.0\n"
               "bed-us,15169,0,10.0.0.1,L1,20,11.0\n");
    CHECK(code_of([&] { load_store(path, GridSpec{0, 300, 4}); }) == Errc::invalid_value);
}

TEST_CASE("an empty store file loads as an empty store") {
    const auto path = temp_file("empty.csv");
    write_file(path, "monitor,asn,ind,target,link,timestamp,rtt_ms\n");
    const SeriesStore store = load_store(path, 300);
    CHECK(store.empty());
    CHECK(store.grid().length == 0);
}

TEST_CASE("stores refuse duplicate keys and foreign grids") {
    SeriesStore store{GridSpec{0, 300, 2}};
    store.insert(testutil::series({1.0, 2.0}));
    CHECK(code_of([&] { store.insert(testutil::series({3.0, 4.0})); }) == Errc::invalid_argument);
    CHECK(code_of([&] {
              store.insert(testutil::series({1.0, 2.0}, testutil::key("other"), 600));
          }) == Errc::grid_mismatch);
    CHECK(store.find(testutil::key("absent")) == nullptr);
}
