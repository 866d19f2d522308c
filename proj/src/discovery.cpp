#include "discovery.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "concurrency.hpp"
#include "csv.hpp"
#include "html.hpp"
#include "strings.hpp"
#include "url.hpp"

namespace feedpipe {

namespace {

bool is_http_url(const std::string& s) {
    Url u = parse_url(s);
    return u.valid && (u.scheme == "http" || u.scheme == "https");
}

}  // namespace

UrlList load_url_list(const std::string& csv_text) {
    UrlList out;
    std::vector<CsvRow> rows = parse_csv(csv_text);
    if (rows.empty())
        return out;

    // Header heuristic: the first row is a header only when its own first
    // cell is not a URL but some later row's is.
    std::size_t start = 0;
    if (!rows[0].cells.empty() && !is_http_url(trim(rows[0].cells[0]))) {
        bool later_url = false;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (!rows[i].cells.empty() && is_http_url(trim(rows[i].cells[0]))) {
                later_url = true;
                break;
            }
        }
        if (later_url)
            start = 1;
    }

    for (std::size_t i = start; i < rows.size(); ++i) {
        const CsvRow& row = rows[i];
        std::string cell = row.cells.empty() ? std::string() : trim(row.cells[0]);
        if (cell.empty())
            continue;
        if (!is_http_url(cell)) {
            out.rejected.push_back({row.row_number, cell});
            continue;
        }
        SourceUrl src;
        src.raw = cell;
        src.normalized = normalize_url(cell);
        out.sources.push_back(std::move(src));
    }
    return out;
}

std::vector<SourceUrl> normalize_and_dedupe(const std::vector<SourceUrl>& urls) {
    std::vector<SourceUrl> out;
    std::set<std::string> seen;
    for (const SourceUrl& u : urls) {
        std::string norm = u.normalized.empty() ? normalize_url(u.raw) : u.normalized;
        if (norm.empty() || !seen.insert(norm).second)
            continue;
        SourceUrl copy = u;
        copy.normalized = norm;
        out.push_back(std::move(copy));
    }
    return out;
}

ProbeResult probe_url(const std::string& url, HttpClient& client) {
    ProbeResult r;
    HttpResponse resp = client.get(url, {}, {});
    if (resp.transport_error)
        return r;
    r.status = resp.status;
    r.alive = resp.status >= 200 && resp.status <= 399;
    return r;
}

namespace {

// Resolves href against the page URL and keeps it only when the result is an
// absolute http(s) URL not already collected.
void add_link(const std::string& base_url, const std::string& href, std::vector<std::string>& out,
              std::set<std::string>& seen) {
    std::string trimmed = trim(href);
    if (trimmed.empty())
        return;
    std::string resolved = resolve_reference(base_url, trimmed);
    if (resolved.empty() || !parse_url(resolved).valid)
        return;
    Url u = parse_url(resolved);
    if (u.scheme != "http" && u.scheme != "https")
        return;
    if (seen.insert(resolved).second)
        out.push_back(resolved);
}

bool rel_has_alternate(const std::string& rel) {
    for (const std::string& token : split_ws(rel))
        if (iequals(token, "alternate"))
            return true;
    return false;
}

bool is_feed_type(const std::string& type) {
    std::string mime = type;
    std::size_t semi = mime.find(';');
    if (semi != std::string::npos)
        mime = mime.substr(0, semi);
    mime = to_lower(trim(mime));
    return mime == "application/rss+xml" || mime == "application/atom+xml";
}

bool path_is_feed(const std::string& resolved) {
    Url u = parse_url(resolved);
    std::string path = to_lower(u.path);
    return iends_with(path, "/feed") || iends_with(path, "/feed/");
}

}  // namespace

std::vector<std::string> discover_feeds_strict(const std::string& html, const std::string& base_url) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const HtmlTag& tag : scan_tags(html)) {
        if (tag.closing || tag.name != "link")
            continue;
        auto rel = tag_attr(tag, "rel");
        auto type = tag_attr(tag, "type");
        auto href = tag_attr(tag, "href");
        if (!rel || !type || !href)
            continue;
        if (!rel_has_alternate(*rel) || !is_feed_type(*type))
            continue;
        add_link(base_url, *href, out, seen);
    }
    return out;
}

std::vector<std::string> discover_feeds_fallback(const std::string& html, const std::string& base_url) {
    std::vector<std::string> out;
    std::set<std::string> seen;

    auto consider = [&](const std::string& href, const std::string& text) {
        std::string trimmed = trim(href);
        if (trimmed.empty())
            return;
        std::string resolved = resolve_reference(base_url, trimmed);
        if (resolved.empty())
            return;
        Url u = parse_url(resolved);
        if (!u.valid || (u.scheme != "http" && u.scheme != "https"))
            return;
        if (icontains(href, "rss") || icontains(text, "rss") || path_is_feed(resolved))
            add_link(base_url, href, out, seen);
    };

    for (const HtmlAnchor& a : scan_anchors(html))
        consider(a.href, a.text);
    for (const HtmlTag& tag : scan_tags(html)) {
        if (tag.closing || tag.name != "link")
            continue;
        if (auto href = tag_attr(tag, "href"))
            consider(*href, "");
    }
    return out;
}

std::vector<ManualAddition> load_manual_additions(const std::string& csv_text) {
    std::vector<ManualAddition> out;
    std::vector<CsvRow> rows = parse_csv(csv_text);
    if (rows.empty())
        return out;
    std::size_t start = 0;
    if (!rows[0].cells.empty() && !is_http_url(trim(rows[0].cells[0]))) {
        bool later_url = false;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (!rows[i].cells.empty() && is_http_url(trim(rows[i].cells[0]))) {
                later_url = true;
                break;
            }
        }
        if (later_url)
            start = 1;
    }
    for (std::size_t i = start; i < rows.size(); ++i) {
        const CsvRow& row = rows[i];
        if (row.cells.size() < 2)
            continue;
        ManualAddition add;
        add.source_url = trim(row.cells[0]);
        add.feed_url = trim(row.cells[1]);
        if (!add.source_url.empty() && !add.feed_url.empty())
            out.push_back(std::move(add));
    }
    return out;
}

DiscoveryRunResult run_discovery(const std::vector<SourceUrl>& deduped, HttpClient& client,
                                 const std::vector<ManualAddition>& manual,
                                 const DiscoveryOptions& options) {
    DiscoveryRunResult result;
    result.records.resize(deduped.size());

    for_each_key_limited(
        deduped.size(), options.workers,
        [&](std::size_t i) { return host_of(deduped[i].normalized); },
        [&](std::size_t i) {
            const SourceUrl& src = deduped[i];
            DiscoveryRecord rec;
            rec.url = src.raw;
            HttpResponse resp = client.get(src.normalized, {}, {});
            if (!resp.transport_error) {
                rec.status = resp.status;
                rec.content_type = resp.content_type();
                if (resp.status >= 200 && resp.status <= 399) {
                    rec.rss_links = discover_feeds_strict(resp.body, src.normalized);
                    rec.methods.assign(rec.rss_links.size(), "strict");
                    if (rec.rss_links.empty()) {
                        rec.rss_links = discover_feeds_fallback(resp.body, src.normalized);
                        rec.methods.assign(rec.rss_links.size(), "fallback");
                    }
                }
            }
            result.records[i] = std::move(rec);
        });

    // Manual additions attach to live records by normalized source URL;
    // additions that match nothing are reported, not silently dropped.
    for (const ManualAddition& add : manual) {
        std::string norm = normalize_url(add.source_url);
        bool matched = false;
        for (std::size_t i = 0; i < deduped.size(); ++i) {
            if (deduped[i].normalized != norm)
                continue;
            matched = true;
            DiscoveryRecord& rec = result.records[i];
            if (!rec.status || *rec.status < 200 || *rec.status > 399) {
                result.warnings.push_back("manual addition for dead URL skipped: " + add.source_url);
                break;
            }
            if (!is_http_url(add.feed_url)) {
                result.warnings.push_back("manual feed URL not absolute, skipped: " + add.feed_url);
                break;
            }
            if (std::find(rec.rss_links.begin(), rec.rss_links.end(), add.feed_url) ==
                rec.rss_links.end()) {
                rec.rss_links.push_back(add.feed_url);
                rec.methods.push_back("manual");
            }
            break;
        }
        if (!matched)
            result.warnings.push_back("manual addition matches no input URL: " + add.source_url);
    }
    return result;
}

std::string discovery_records_to_json(const std::vector<DiscoveryRecord>& records) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const DiscoveryRecord& rec : records) {
        nlohmann::ordered_json item;
        item["url"] = rec.url;
        if (rec.status)
            item["status"] = *rec.status;
        else
            item["status"] = nullptr;
        if (rec.content_type)
            item["content_type"] = *rec.content_type;
        else
            item["content_type"] = nullptr;
        item["rss_links"] = rec.rss_links;
        item["rss_link_methods"] = rec.methods;
        arr.push_back(std::move(item));
    }
    return arr.dump(2) + "\n";
}

}  // namespace feedpipe
