#pragma once

#include <string>
#include <vector>

#include "converter.hpp"
#include "feed_parser.hpp"

namespace feedpipe {

/// Corpus-scale kernels. The plain names run parallel (OpenMP when compiled
/// in) with results in input order; the _serial variants are the reference
/// implementations the tests and the benchmark compare against.

struct SnapshotInput {
    std::string bytes;
    std::string rss_url;
    std::string fetched_at;
};

std::vector<ParseFeedResult> parse_many(const std::vector<SnapshotInput>& inputs);
std::vector<ParseFeedResult> parse_many_serial(const std::vector<SnapshotInput>& inputs);

std::vector<std::vector<NormalizedRecord>> convert_many(const std::vector<ParsedFeed>& feeds);
std::vector<std::vector<NormalizedRecord>> convert_many_serial(const std::vector<ParsedFeed>& feeds);

}  // namespace feedpipe
