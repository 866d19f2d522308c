#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "http.hpp"

namespace feedpipe {

struct FetchMetadata {
    std::string url;
    std::string timestamp;  // UTC, ISO 8601, seconds precision
    std::string filename;   // relative to the snapshot dir
    int status_code = 0;
    std::string content_type;
};

struct FetchRunResult {
    std::size_t downloaded = 0;
    std::size_t errors = 0;
    std::vector<std::pair<std::string, std::string>> error_urls;  // (url, reason)
    std::vector<FetchMetadata> metadata;
};

/// Union of all rss_links arrays in a discovery JSON document,
/// first-occurrence order, duplicates removed. Throws std::runtime_error on
/// malformed JSON or a record without a proper rss_links list, naming the
/// offending record index.
std::vector<std::string> extract_feed_urls(const std::string& discovery_json);

/// Deterministic seeded shuffle followed by a repair pass: whenever an
/// arrangement with no two adjacent URLs on the same normalized host exists,
/// the result has that property; otherwise the plain shuffle is returned.
/// Always a permutation of the input.
std::vector<std::string> politeness_order(const std::vector<std::string>& urls, std::uint64_t seed);

struct LoadOutcome {
    bool ok = false;
    FetchMetadata meta;   // filled on success
    std::string reason;   // filled on failure, recorded verbatim in errors.json
    int attempts = 0;     // HTTP requests issued
};

/// Fetches one feed with the retry contract and writes the body to a fresh
/// snapshot file (tmp file + rename, so no partial snapshots survive).
/// Responses whose Content-Type does not contain "xml" are rejected without
/// writing.
LoadOutcome load_rss(const std::string& url, const std::filesystem::path& snapshot_dir,
                     HttpClient& client, Sleeper& sleeper, const RetryPolicy& policy = {});

struct FetchOptions {
    std::uint64_t seed = 0;
    int max_concurrency = 4;  // one in-flight request per host regardless
    RetryPolicy retry;
};

/// Full fetch stage: extract URLs, order them politely, download each, write
/// metadata.json and errors.json into snapshot_dir. Per-feed failures never
/// abort the run; an unusable snapshot_dir throws.
FetchRunResult run_fetch(const std::string& discovery_json, const std::filesystem::path& snapshot_dir,
                         HttpClient& client, Sleeper& sleeper, const FetchOptions& options = {});

std::string fetch_metadata_to_json(const std::vector<FetchMetadata>& metadata);
std::string fetch_errors_to_json(const std::vector<std::pair<std::string, std::string>>& error_urls);

}  // namespace feedpipe
