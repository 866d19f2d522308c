#include "corpus.hpp"

namespace feedpipe {

namespace {

ParseFeedResult parse_one(const SnapshotInput& in) {
    ParseFeedResult r = parse_feed_document(in.bytes, in.rss_url);
    r.parsed.feed.fetched_at = in.fetched_at;
    return r;
}

}  // namespace

std::vector<ParseFeedResult> parse_many_serial(const std::vector<SnapshotInput>& inputs) {
    std::vector<ParseFeedResult> out(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i)
        out[i] = parse_one(inputs[i]);
    return out;
}

std::vector<ParseFeedResult> parse_many(const std::vector<SnapshotInput>& inputs) {
    std::vector<ParseFeedResult> out(inputs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < inputs.size(); ++i)
        out[i] = parse_one(inputs[i]);
    return out;
}

std::vector<std::vector<NormalizedRecord>> convert_many_serial(const std::vector<ParsedFeed>& feeds) {
    std::vector<std::vector<NormalizedRecord>> out(feeds.size());
    for (std::size_t i = 0; i < feeds.size(); ++i)
        out[i] = convert_one(feeds[i]);
    return out;
}

std::vector<std::vector<NormalizedRecord>> convert_many(const std::vector<ParsedFeed>& feeds) {
    std::vector<std::vector<NormalizedRecord>> out(feeds.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < feeds.size(); ++i)
        out[i] = convert_one(feeds[i]);
    return out;
}

}  // namespace feedpipe
