#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace feedpipe {

struct Url {
    std::string scheme;  // lowercased
    std::string host;    // lowercased
    int port = -1;       // -1 when absent
    std::string path;    // starts with '/' or empty
    std::string query;   // without '?'
    std::string fragment;
    bool valid = false;
};

/// Parses an absolute http(s)-style URL. `valid` is false when there is no
/// scheme://host structure or the authority is malformed.
Url parse_url(std::string_view s);

std::string url_to_string(const Url& u);

bool is_absolute_url(std::string_view s);

/// Canonical form used for deduplication: lowercase scheme and host, leading
/// "www." labels stripped, default ports dropped, trailing slashes removed,
/// fragment dropped. Path case and query are preserved. Returns "" when the
/// input is not an absolute http(s) URL. Idempotent.
std::string normalize_url(std::string_view s);

/// Host of the normalized form ("" when unparseable). Used as the politeness
/// and dedup key.
std::string host_of(std::string_view url);

/// RFC 3986-style reference resolution (scheme-relative, absolute-path,
/// relative-path, query-only and fragment-only references; dot segments
/// removed). Returns ref unchanged when it is already absolute, "" when base
/// is unusable.
std::string resolve_reference(const std::string& base, std::string_view ref);

/// Non-empty '/'-separated segments of a URL path.
std::vector<std::string> path_segments(std::string_view path);

}  // namespace feedpipe
