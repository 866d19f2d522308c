#include "converter.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "corpus.hpp"
#include "html.hpp"
#include "iso639.hpp"
#include "sha256.hpp"
#include "strings.hpp"
#include "url.hpp"

namespace feedpipe {

const char* kRecordIdSchemeVersion = "record-id/sha256-16hex/1.0";

namespace {

std::string slurp(const std::filesystem::path& path, bool& ok) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        ok = false;
        return {};
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    ok = true;
    return buf.str();
}

}  // namespace

DumpResult parse_rss_dump(const std::filesystem::path& snapshot_dir) {
    bool ok = false;
    std::string metadata_text = slurp(snapshot_dir / "metadata.json", ok);
    if (!ok)
        throw std::runtime_error("missing metadata.json in " + snapshot_dir.string());
    nlohmann::json doc = nlohmann::json::parse(metadata_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        throw std::runtime_error("metadata.json is not a JSON array");

    DumpResult result;
    std::vector<SnapshotInput> inputs;
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("filename") || !item["filename"].is_string()) {
            result.skipped.emplace_back("(unnamed)", "metadata record lacks a filename");
            continue;
        }
        std::string filename = item["filename"].get<std::string>();
        SnapshotInput in;
        in.rss_url = item.value("url", std::string());
        in.fetched_at = item.value("timestamp", std::string());
        bool read_ok = false;
        in.bytes = slurp(snapshot_dir / filename, read_ok);
        if (!read_ok) {
            result.skipped.emplace_back(filename, "snapshot file missing or unreadable");
            continue;
        }
        inputs.push_back(std::move(in));
    }

    std::vector<ParseFeedResult> parsed = parse_many(inputs);
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        if (parsed[i].ok)
            result.corpus.push_back(std::move(parsed[i].parsed));
        else
            result.skipped.emplace_back(std::filesystem::path(inputs[i].rss_url).string(),
                                        parsed[i].error);
    }
    return result;
}

bool is_comment_feed_url(const std::string& rss_url) {
    Url u = parse_url(rss_url);
    if (!u.valid)
        return false;
    // Segment match covers the .../comments/feed and .../feed/comments
    // shapes as well.
    for (const std::string& seg : path_segments(u.path))
        if (iequals(seg, "comments"))
            return true;
    return false;
}

bool is_comment_entry_link(const std::string& link) {
    if (icontains(link, "#comment"))
        return true;
    Url u = parse_url(link);
    if (!u.valid)
        return false;
    for (const std::string& seg : path_segments(u.path))
        if (iequals(seg, "comments"))
            return true;
    return false;
}

SplitResult split_comments(const std::vector<ParsedFeed>& parsed) {
    SplitResult out;
    for (const ParsedFeed& pf : parsed) {
        if (is_comment_feed_url(pf.feed.rss_url)) {
            out.comments.push_back(pf);
            continue;
        }
        ParsedFeed blog = pf;
        blog.entries.clear();
        for (const EntryRecord& e : pf.entries) {
            if (e.link && is_comment_entry_link(*e.link))
                out.comment_entries_from_blog.push_back(e);
            else
                blog.entries.push_back(e);
        }
        out.blog.push_back(std::move(blog));
    }
    return out;
}

std::string container_record_id(const std::string& rss_url) {
    std::string norm = normalize_url(rss_url);
    return sha256_hex16(norm.empty() ? rss_url : norm);
}

std::string item_record_id(const EntryRecord& entry, const std::string& parent_record_id) {
    if (entry.entry_id && !entry.entry_id->empty())
        return sha256_hex16(*entry.entry_id);
    if (entry.link && !entry.link->empty())
        return sha256_hex16(*entry.link);
    std::string title = entry.title ? *entry.title : std::string();
    return sha256_hex16(title + "|" + parent_record_id);
}

namespace {

// First n code points, whole characters only.
std::string utf8_prefix(const std::string& s, std::size_t n) {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < s.size() && count < n) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
        i += len;
        if (i > s.size())
            i = s.size();
        ++count;
    }
    return s.substr(0, i);
}

void push_unique(std::vector<std::string>& urls, const std::optional<std::string>& url) {
    if (!url || url->empty())
        return;
    if (std::find(urls.begin(), urls.end(), *url) == urls.end())
        urls.push_back(*url);
}

}  // namespace

NormalizedRecord convert_feed(const FeedRecord& feed) {
    NormalizedRecord rec;
    rec.kind = "container";
    rec.record_id = container_record_id(feed.rss_url);

    if (feed.title && !trim(*feed.title).empty()) {
        rec.title = trim(*feed.title);
    } else {
        std::string host = feed.blog_url ? host_of(*feed.blog_url) : std::string();
        if (host.empty())
            host = host_of(feed.rss_url);
        rec.title = host.empty() ? feed.rss_url : host;
    }

    if (feed.subtitle) {
        std::string abstract = strip_markup(*feed.subtitle);
        if (!abstract.empty())
            rec.abstract = abstract;
    }

    rec.languages = get_languages(feed.language);
    push_unique(rec.urls, feed.blog_url);
    push_unique(rec.urls, feed.rss_url);
    rec.publication_date = feed.last_updated;
    return rec;
}

NormalizedRecord convert_entry(const EntryRecord& entry, const NormalizedRecord& parent) {
    NormalizedRecord rec;
    rec.kind = "item";
    rec.record_id = item_record_id(entry, parent.record_id);
    rec.parent_record_id = parent.record_id;

    // The displayed abstract comes from the summary alone; content is never
    // substituted.
    if (entry.summary) {
        std::string abstract = strip_markup(*entry.summary);
        if (!abstract.empty())
            rec.abstract = abstract;
    }

    if (entry.title && !trim(*entry.title).empty())
        rec.title = trim(*entry.title);
    else if (rec.abstract)
        rec.title = utf8_prefix(*rec.abstract, 80);
    else if (entry.link)
        rec.title = *entry.link;

    rec.authors = entry.authors;
    rec.languages = parent.languages;  // entries carry no language of their own
    push_unique(rec.urls, entry.link);
    rec.publication_date = entry.publication_date;
    rec.keywords = entry.tags;
    return rec;
}

std::vector<NormalizedRecord> convert_one(const ParsedFeed& feed) {
    std::vector<NormalizedRecord> out;
    out.reserve(1 + feed.entries.size());
    out.push_back(convert_feed(feed.feed));
    const NormalizedRecord& container = out.front();
    for (const EntryRecord& e : feed.entries)
        out.push_back(convert_entry(e, container));
    return out;
}

ConversionOutput convert_corpus(const SplitResult& split) {
    ConversionOutput out;

    std::map<std::string, NormalizedRecord> blog_containers;  // rss_url -> container
    for (const auto& batch : convert_many(split.blog)) {
        for (const NormalizedRecord& rec : batch)
            out.records.push_back(rec);
    }
    for (const ParsedFeed& pf : split.blog)
        blog_containers.emplace(pf.feed.rss_url, convert_feed(pf.feed));

    for (const auto& batch : convert_many(split.comments))
        for (const NormalizedRecord& rec : batch)
            out.comments.push_back(rec);

    for (const EntryRecord& e : split.comment_entries_from_blog) {
        auto it = blog_containers.find(e.parent_rss_url);
        NormalizedRecord parent =
            it != blog_containers.end() ? it->second : NormalizedRecord{};
        if (it == blog_containers.end()) {
            // Orphaned comment entry: synthesize the container id it would
            // have had so the link stays deterministic.
            parent.record_id = container_record_id(e.parent_rss_url);
        }
        out.comments.push_back(convert_entry(e, parent));
    }

    auto by_id = [](const NormalizedRecord& a, const NormalizedRecord& b) {
        return a.record_id < b.record_id;
    };
    std::stable_sort(out.records.begin(), out.records.end(), by_id);
    std::stable_sort(out.comments.begin(), out.comments.end(), by_id);
    return out;
}

std::string records_to_json(const std::vector<NormalizedRecord>& records) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const NormalizedRecord& rec : records) {
        nlohmann::ordered_json item;
        item["record_id"] = rec.record_id;
        item["kind"] = rec.kind;
        item["title"] = rec.title;
        item["abstract"] = rec.abstract ? nlohmann::ordered_json(*rec.abstract)
                                        : nlohmann::ordered_json(nullptr);
        item["authors"] = rec.authors;
        item["languages"] = rec.languages;
        item["urls"] = rec.urls;
        item["publication_date"] = rec.publication_date
                                       ? nlohmann::ordered_json(format_iso8601(*rec.publication_date))
                                       : nlohmann::ordered_json(nullptr);
        item["keywords"] = rec.keywords;
        item["parent_record_id"] = rec.parent_record_id
                                       ? nlohmann::ordered_json(*rec.parent_record_id)
                                       : nlohmann::ordered_json(nullptr);
        item["source"] = rec.source;
        arr.push_back(std::move(item));
    }
    return arr.dump(2) + "\n";
}

std::vector<NormalizedRecord> records_from_json(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        throw std::runtime_error("records JSON is not a JSON array");

    auto opt_string = [](const nlohmann::json& v) -> std::optional<std::string> {
        if (v.is_string())
            return v.get<std::string>();
        return std::nullopt;
    };
    auto string_list = [](const nlohmann::json& v) {
        std::vector<std::string> out;
        if (v.is_array())
            for (const auto& e : v)
                if (e.is_string())
                    out.push_back(e.get<std::string>());
        return out;
    };

    std::vector<NormalizedRecord> out;
    for (const auto& item : doc) {
        if (!item.is_object())
            throw std::runtime_error("records JSON: element is not an object");
        NormalizedRecord rec;
        rec.record_id = item.value("record_id", std::string());
        rec.kind = item.value("kind", std::string());
        rec.title = item.value("title", std::string());
        rec.abstract = opt_string(item.value("abstract", nlohmann::json(nullptr)));
        rec.authors = string_list(item.value("authors", nlohmann::json::array()));
        rec.languages = string_list(item.value("languages", nlohmann::json::array()));
        rec.urls = string_list(item.value("urls", nlohmann::json::array()));
        if (auto date = opt_string(item.value("publication_date", nlohmann::json(nullptr))))
            rec.publication_date = parse_datetime(*date);
        rec.keywords = string_list(item.value("keywords", nlohmann::json::array()));
        rec.parent_record_id = opt_string(item.value("parent_record_id", nlohmann::json(nullptr)));
        rec.source = item.value("source", std::string("blog"));
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace feedpipe
