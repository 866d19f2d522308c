#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feed_parser.hpp"

namespace feedpipe {

/// Bibliographic template: a feed becomes a container (journal-like), an
/// entry becomes an item (paper-like).
struct NormalizedRecord {
    std::string record_id;
    std::string kind;  // "container" or "item"
    std::string title;
    std::optional<std::string> abstract;
    std::vector<std::string> authors;
    std::vector<std::string> languages;  // ISO 639-3
    std::vector<std::string> urls;
    std::optional<UtcSeconds> publication_date;
    std::vector<std::string> keywords;
    std::optional<std::string> parent_record_id;  // present iff kind == "item"
    std::string source = "blog";
};

/// Version stamp for the record-id scheme, printed by --version.
extern const char* kRecordIdSchemeVersion;

struct DumpResult {
    std::vector<ParsedFeed> corpus;
    std::vector<std::pair<std::string, std::string>> skipped;  // (filename, reason)
};

/// Parses every snapshot listed in metadata.json, attaching rss_url and the
/// download timestamp from the metadata. Unreadable or malformed snapshots
/// are skipped and reported; a missing or invalid metadata.json throws.
DumpResult parse_rss_dump(const std::filesystem::path& snapshot_dir);

bool is_comment_feed_url(const std::string& rss_url);
bool is_comment_entry_link(const std::string& link);

struct SplitResult {
    std::vector<ParsedFeed> blog;      // comment entries removed
    std::vector<ParsedFeed> comments;  // whole comment feeds, entries intact
    // Comment entries found inside blog-side feeds; their parent containers
    // stay on the blog side.
    std::vector<EntryRecord> comment_entries_from_blog;
};

/// Partitions feeds and entries by the comment-URL rules: counts add up at
/// both granularities and nothing lands on both sides.
SplitResult split_comments(const std::vector<ParsedFeed>& parsed);

/// Stable ids: containers hash their normalized rss_url, items hash entry_id,
/// else link, else title + parent id.
std::string container_record_id(const std::string& rss_url);
std::string item_record_id(const EntryRecord& entry, const std::string& parent_record_id);

NormalizedRecord convert_feed(const FeedRecord& feed);
NormalizedRecord convert_entry(const EntryRecord& entry, const NormalizedRecord& parent);

/// Container followed by one item per entry, all parented to the container.
std::vector<NormalizedRecord> convert_one(const ParsedFeed& feed);

struct ConversionOutput {
    std::vector<NormalizedRecord> records;   // blog side, sorted by record_id
    std::vector<NormalizedRecord> comments;  // comment side, sorted by record_id
};

ConversionOutput convert_corpus(const SplitResult& split);

std::string records_to_json(const std::vector<NormalizedRecord>& records);

/// Inverse of records_to_json; throws std::runtime_error on a document that
/// is not an array of record objects.
std::vector<NormalizedRecord> records_from_json(const std::string& json_text);

}  // namespace feedpipe
