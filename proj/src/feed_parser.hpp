#pragma once

#include <optional>
#include <string>
#include <vector>

#include "datetime.hpp"

namespace feedpipe {

struct FeedRecord {
    std::optional<std::string> title;
    std::optional<std::string> subtitle;
    std::optional<std::string> blog_url;
    std::string rss_url;  // the feed this record came from, always present
    std::optional<std::string> last_updated_raw;
    std::optional<UtcSeconds> last_updated;  // parsed from last_updated_raw
    std::optional<std::string> language;     // BCP 47 tag as found
    std::string fetched_at;                  // download timestamp, from fetch metadata
};

struct EntryRecord {
    std::optional<std::string> title;
    std::optional<std::string> entry_id;
    std::optional<std::string> link;
    std::optional<std::string> publication_date_raw;
    std::optional<UtcSeconds> publication_date;
    std::vector<std::string> authors;
    std::optional<std::string> summary;
    std::optional<std::string> content;
    std::vector<std::string> tags;  // no empty strings
    std::optional<std::string> comments_url;
    std::string parent_rss_url;  // equals the owning FeedRecord.rss_url
};

struct ParsedFeed {
    FeedRecord feed;
    std::vector<EntryRecord> entries;
    std::size_t encoding_replacements = 0;
};

struct ParseFeedResult {
    bool ok = false;
    ParsedFeed parsed;
    std::string error;  // document-level parse failure or unsupported root
};

/// Parses one RSS 2.0 (channel/item) or Atom (feed/entry) snapshot. Absent
/// elements yield absent fields, never failure; only a document that is not
/// well-formed XML or has an unrecognized root element fails.
ParseFeedResult parse_feed_document(const std::string& xml_bytes, const std::string& rss_url);

/// Round-trippable JSON for a parsed corpus; the analyze stage reads this.
std::string parsed_corpus_to_json(const std::vector<ParsedFeed>& corpus);
std::vector<ParsedFeed> parsed_corpus_from_json(const std::string& json_text);

}  // namespace feedpipe
