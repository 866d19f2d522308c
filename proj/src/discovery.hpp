#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "http.hpp"

namespace feedpipe {

enum class Liveness { unknown, alive, dead };

struct SourceUrl {
    std::string raw;         // as read from the CSV
    std::string normalized;  // canonical form, see normalize_url
    Liveness alive = Liveness::unknown;
};

struct RejectedRow {
    std::size_t row = 0;  // 1-based physical row in the CSV
    std::string text;
};

struct UrlList {
    std::vector<SourceUrl> sources;
    std::vector<RejectedRow> rejected;
};

/// Reads the first column of a CSV as URLs. A header row is skipped only when
/// its first cell is not a URL and at least one later row holds one; rows that
/// fail URL parsing land in `rejected` with their row numbers.
UrlList load_url_list(const std::string& csv_text);

/// One survivor per distinct normalized form, first occurrence wins, order
/// preserved. Idempotent.
std::vector<SourceUrl> normalize_and_dedupe(const std::vector<SourceUrl>& urls);

struct ProbeResult {
    bool alive = false;
    std::optional<int> status;  // absent on transport failure
};

/// Single GET (redirects followed by the client, up to 5); alive iff the
/// final status is in 200-399. Never throws.
ProbeResult probe_url(const std::string& url, HttpClient& client);

/// `link rel="alternate"` elements typed application/rss+xml or
/// application/atom+xml, case-insensitively, any attribute order or quote
/// style. Hrefs resolved against base_url; duplicates removed.
std::vector<std::string> discover_feeds_strict(const std::string& html, const std::string& base_url);

/// Anchor or link elements whose href or visible text contains "rss" or whose
/// resolved path ends with "/feed" or "/feed/" (case-insensitive). Same
/// resolution and dedup as strict mode.
std::vector<std::string> discover_feeds_fallback(const std::string& html, const std::string& base_url);

struct DiscoveryRecord {
    std::string url;  // original URL from the CSV
    std::optional<int> status;
    std::optional<std::string> content_type;
    std::vector<std::string> rss_links;
    std::vector<std::string> methods;  // parallel to rss_links: strict|fallback|manual
};

struct ManualAddition {
    std::string source_url;
    std::string feed_url;
};

/// Manual-additions CSV: columns (source_url, feed_url), optional header.
std::vector<ManualAddition> load_manual_additions(const std::string& csv_text);

struct DiscoveryOptions {
    int workers = 4;  // capped to one in-flight request per host regardless
};

struct DiscoveryRunResult {
    std::vector<DiscoveryRecord> records;
    // Manual additions whose source_url matched no input URL, with reasons.
    std::vector<std::string> warnings;
};

/// One record per deduplicated input URL, in input order. Live pages get
/// strict discovery, then fallback when strict found nothing, then manual
/// additions; dead pages keep their observed status and no links. Per-URL
/// failures never abort the run.
DiscoveryRunResult run_discovery(const std::vector<SourceUrl>& deduped, HttpClient& client,
                                 const std::vector<ManualAddition>& manual,
                                 const DiscoveryOptions& options = {});

/// JSON array with keys url, status, content_type, rss_links,
/// rss_link_methods per record.
std::string discovery_records_to_json(const std::vector<DiscoveryRecord>& records);

}  // namespace feedpipe
