#include "fetcher.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "concurrency.hpp"
#include "datetime.hpp"
#include "sha256.hpp"
#include "strings.hpp"
#include "url.hpp"

namespace feedpipe {

std::vector<std::string> extract_feed_urls(const std::string& discovery_json) {
    nlohmann::json doc = nlohmann::json::parse(discovery_json, nullptr, false);
    if (doc.is_discarded())
        throw std::runtime_error("discovery JSON is not valid JSON");
    if (!doc.is_array())
        throw std::runtime_error("discovery JSON is not an array");

    std::vector<std::string> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        if (!rec.is_object() || !rec.contains("rss_links"))
            throw std::runtime_error("discovery record " + std::to_string(i) +
                                     ": missing rss_links key");
        const auto& links = rec["rss_links"];
        if (!links.is_array())
            throw std::runtime_error("discovery record " + std::to_string(i) +
                                     ": rss_links is not a list");
        for (std::size_t j = 0; j < links.size(); ++j) {
            if (!links[j].is_string())
                throw std::runtime_error("discovery record " + std::to_string(i) + ": rss_links[" +
                                         std::to_string(j) + "] is not a string");
            std::string url = links[j].get<std::string>();
            if (seen.insert(url).second)
                out.push_back(std::move(url));
        }
    }
    return out;
}

namespace {

bool has_same_host_neighbors(const std::vector<std::string>& urls) {
    for (std::size_t i = 1; i < urls.size(); ++i)
        if (host_of(urls[i - 1]) == host_of(urls[i]))
            return true;
    return false;
}

}  // namespace

std::vector<std::string> politeness_order(const std::vector<std::string>& urls, std::uint64_t seed) {
    std::vector<std::string> shuffled = urls;
    std::mt19937_64 rng(seed);
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(shuffled[i - 1], shuffled[j]);
    }
    if (!has_same_host_neighbors(shuffled))
        return shuffled;

    // Group by host in shuffled order.
    std::vector<std::string> hosts;                  // first-appearance order
    std::vector<std::vector<std::string>> groups;    // parallel to hosts
    for (const std::string& url : shuffled) {
        std::string host = host_of(url);
        std::size_t idx = hosts.size();
        for (std::size_t k = 0; k < hosts.size(); ++k)
            if (hosts[k] == host) {
                idx = k;
                break;
            }
        if (idx == hosts.size()) {
            hosts.push_back(host);
            groups.emplace_back();
        }
        groups[idx].push_back(url);
    }

    // A conflict-free arrangement exists iff the largest host group fits in
    // ceil(n/2) slots; in that case filling even positions first, largest
    // group first, keeps same-host items at least two apart.
    std::size_t n = shuffled.size();
    std::size_t max_count = 0;
    for (const auto& g : groups)
        max_count = std::max(max_count, g.size());
    if (max_count > (n + 1) / 2)
        return shuffled;

    std::vector<std::size_t> order(groups.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return groups[a].size() > groups[b].size();
    });

    std::vector<std::string> result(n);
    std::size_t slot = 0;  // 0,2,4,... then 1,3,5,...
    for (std::size_t k : order) {
        for (std::string& url : groups[k]) {
            result[slot] = std::move(url);
            slot += 2;
            if (slot >= n)
                slot = 1;
        }
    }
    return result;
}

namespace {

bool content_type_is_xml(const std::string& content_type) {
    return icontains(content_type, "xml");
}

}  // namespace

LoadOutcome load_rss(const std::string& url, const std::filesystem::path& snapshot_dir,
                     HttpClient& client, Sleeper& sleeper, const RetryPolicy& policy) {
    LoadOutcome out;
    GetResult got = get_with_retry(client, url, {}, {}, policy, sleeper);
    out.attempts = got.attempts;
    if (!got.ok()) {
        out.reason = got.failure_reason;
        return out;
    }

    const HttpResponse& resp = *got.response;
    std::string content_type = resp.content_type().value_or("");
    if (!content_type_is_xml(content_type)) {
        out.reason = "content type not XML: " + (content_type.empty() ? "(none)" : content_type);
        return out;
    }
    if (resp.body.empty()) {
        out.reason = "empty response body";
        return out;
    }

    UtcSeconds now = utc_now();
    std::string stamp = format_iso8601(now);
    std::string filename = sha256_hex16(url) + "_" + format_compact(now) + ".xml";
    std::filesystem::path final_path = snapshot_dir / filename;
    std::filesystem::path tmp_path = snapshot_dir / (filename + ".tmp");

    std::ofstream f(tmp_path, std::ios::binary | std::ios::trunc);
    f.write(resp.body.data(), static_cast<std::streamsize>(resp.body.size()));
    f.close();
    if (!f) {
        std::error_code ec;
        std::filesystem::remove(tmp_path, ec);
        out.reason = "write failed: " + tmp_path.string();
        return out;
    }
    std::error_code ec;
    std::filesystem::rename(tmp_path, final_path, ec);
    if (ec) {
        std::filesystem::remove(tmp_path, ec);
        out.reason = "rename failed: " + final_path.string();
        return out;
    }

    out.ok = true;
    out.meta.url = url;
    out.meta.timestamp = stamp;
    out.meta.filename = filename;
    out.meta.status_code = resp.status;
    out.meta.content_type = content_type;
    return out;
}

FetchRunResult run_fetch(const std::string& discovery_json, const std::filesystem::path& snapshot_dir,
                         HttpClient& client, Sleeper& sleeper, const FetchOptions& options) {
    std::vector<std::string> urls = extract_feed_urls(discovery_json);
    std::vector<std::string> ordered = politeness_order(urls, options.seed);

    std::error_code ec;
    std::filesystem::create_directories(snapshot_dir, ec);
    if (!std::filesystem::is_directory(snapshot_dir))
        throw std::runtime_error("snapshot directory unusable: " + snapshot_dir.string());

    std::vector<LoadOutcome> outcomes(ordered.size());
    for_each_key_limited(
        ordered.size(), options.max_concurrency,
        [&](std::size_t i) { return host_of(ordered[i]); },
        [&](std::size_t i) {
            outcomes[i] = load_rss(ordered[i], snapshot_dir, client, sleeper, options.retry);
        });

    FetchRunResult result;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        if (outcomes[i].ok) {
            ++result.downloaded;
            result.metadata.push_back(std::move(outcomes[i].meta));
        } else {
            ++result.errors;
            result.error_urls.emplace_back(ordered[i], outcomes[i].reason);
        }
    }

    auto write_file = [&](const std::filesystem::path& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
        f.close();
        if (!f)
            throw std::runtime_error("write failed: " + path.string());
    };
    write_file(snapshot_dir / "metadata.json", fetch_metadata_to_json(result.metadata));
    write_file(snapshot_dir / "errors.json", fetch_errors_to_json(result.error_urls));
    return result;
}

std::string fetch_metadata_to_json(const std::vector<FetchMetadata>& metadata) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const FetchMetadata& m : metadata) {
        nlohmann::ordered_json item;
        item["url"] = m.url;
        item["timestamp"] = m.timestamp;
        item["filename"] = m.filename;
        item["status_code"] = m.status_code;
        item["content_type"] = m.content_type;
        arr.push_back(std::move(item));
    }
    return arr.dump(2) + "\n";
}

std::string fetch_errors_to_json(const std::vector<std::pair<std::string, std::string>>& error_urls) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [url, reason] : error_urls) {
        nlohmann::ordered_json item;
        item["url"] = url;
        item["reason"] = reason;
        arr.push_back(std::move(item));
    }
    return arr.dump(2) + "\n";
}

}  // namespace feedpipe
