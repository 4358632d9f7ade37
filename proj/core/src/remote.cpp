#include "rttkit/remote.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cmath>
#include <limits>

#include "rttkit/errors.hpp"

namespace rttkit {

namespace {

using nlohmann::json;

std::string percent_encode(std::string_view text) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        const bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                          (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' || c == '~';
        if (keep) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xf]);
        }
    }
    return out;
}

/// Splits "scheme://host:port/prefix" into the client base and the path
/// prefix (possibly empty).
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    const std::size_t scheme = endpoint.find("://");
    const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
    const std::size_t path_start = endpoint.find('/', host_start);
    if (path_start == std::string::npos) return {endpoint, ""};
    std::string prefix = endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {endpoint.substr(0, path_start), prefix};
}

[[noreturn]] void reject(const std::string& detail) {
    throw Error(Errc::bad_response, detail);
}

/// Key object to a SeriesKey; nullopt when types are right but a value is
/// out of domain. Type violations reject the whole response.
std::optional<SeriesKey> key_from_json(const json& j) {
    if (!j.is_object() || !j.contains("monitor") || !j.contains("asn") || !j.contains("ind") ||
        !j.contains("target") || !j.contains("link"))
        reject("series key must carry monitor, asn, ind, target, link");
    const json& monitor = j.at("monitor");
    const json& asn = j.at("asn");
    const json& ind = j.at("ind");
    const json& target = j.at("target");
    const json& link = j.at("link");
    if (!monitor.is_string() || !target.is_string() || !link.is_string() ||
        !asn.is_number_integer() || !ind.is_number_integer())
        reject("series key field has the wrong type");

    const auto asn_value = asn.get<std::int64_t>();
    if (asn_value < 1 || asn_value > std::numeric_limits<std::uint32_t>::max())
        return std::nullopt;
    SeriesKey key{monitor.get<std::string>(), static_cast<std::uint32_t>(asn_value),
                  ind.get<int>(), target.get<std::string>(), link.get<std::string>()};
    if (!is_valid(key)) return std::nullopt;
    return key;
}

}  // namespace

FetchResult fetch_remote(const std::string& endpoint, const RemoteSelector& selector,
                         TimeRange range) {
    const auto [base, prefix] = split_endpoint(endpoint);
    httplib::Client client(base);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(30, 0);

    std::string path = prefix + "/query?monitor=" + percent_encode(selector.monitor) +
                       "&asn=" + std::to_string(selector.asn);
    if (selector.ind) path += "&ind=" + std::to_string(*selector.ind);
    path += "&start=" + std::to_string(range.start) + "&end=" + std::to_string(range.end);

    const httplib::Result res = client.Get(path);
    if (!res) throw Error(Errc::network_error, httplib::to_string(res.error()));
    if (res->status != 200) reject("status " + std::to_string(res->status));

    const json body = json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("series") ||
        !body.at("series").is_array())
        reject("body must be a JSON object with a \"series\" array");

    FetchResult result;
    for (const json& entry : body.at("series")) {
        if (!entry.is_object() || !entry.contains("key") || !entry.contains("points") ||
            !entry.at("points").is_array())
            reject("each series needs a \"key\" object and a \"points\" array");
        const json& points = entry.at("points");
        const std::optional<SeriesKey> key = key_from_json(entry.at("key"));
        if (!key) {
            // A key outside the domain poisons all of its points.
            result.stats.records_read += points.size();
            result.stats.records_rejected += points.size();
            continue;
        }
        for (const json& point : points) {
            if (!point.is_array() || point.size() != 2 || !point.at(0).is_number_integer() ||
                !point.at(1).is_number())
                reject("each point must be [epoch_seconds, rtt_ms]");
            ++result.stats.records_read;
            ProbeRecord rec{*key, point.at(0).get<std::int64_t>(), point.at(1).get<double>()};
            if (is_valid(rec)) result.records.push_back(std::move(rec));
            else ++result.stats.records_rejected;
        }
    }
    return result;
}

}  // namespace rttkit
