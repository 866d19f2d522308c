#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "converter.hpp"
#include "url.hpp"
#include "fakes.hpp"

using namespace feedpipe;
using testsupport::TempDir;

namespace {

ParsedFeed make_feed(const std::string& rss_url, int entry_count) {
    ParsedFeed f;
    f.feed.title = "Feed at " + rss_url;
    f.feed.subtitle = "About " + rss_url;
    f.feed.blog_url = "https://" + host_of(rss_url) + "/";
    f.feed.rss_url = rss_url;
    f.feed.language = "en-US";
    f.feed.fetched_at = "2023-01-01T00:00:00Z";
    for (int i = 0; i < entry_count; ++i) {
        EntryRecord e;
        e.title = "Post " + std::to_string(i);
        e.link = f.feed.blog_url.value() + "post-" + std::to_string(i) + "/";
        e.entry_id = rss_url + "#guid-" + std::to_string(i);
        e.summary = "Summary " + std::to_string(i);
        e.parent_rss_url = rss_url;
        f.entries.push_back(e);
    }
    return f;
}

}  // namespace

TEST_CASE("is_comment_feed_url matches comment feed shapes") {
    CHECK(is_comment_feed_url("https://b.example/comments/feed/"));
    CHECK(is_comment_feed_url("https://b.example/feed/comments"));
    CHECK(is_comment_feed_url("https://b.example/Comments/Feed"));
    CHECK_FALSE(is_comment_feed_url("https://b.example/feed/"));
    CHECK_FALSE(is_comment_feed_url("https://b.example/commentsandmore/feed"));
}

TEST_CASE("is_comment_entry_link") {
    CHECK(is_comment_entry_link("https://b.example/post/#comment-42"));
    CHECK(is_comment_entry_link("https://b.example/post/comments/42"));
    CHECK_FALSE(is_comment_entry_link("https://b.example/post/"));
}

TEST_CASE("split_comments partitions feeds and entries without loss") {
    std::vector<ParsedFeed> parsed;
    parsed.push_back(make_feed("https://a.example/feed/", 3));
    parsed.push_back(make_feed("https://a.example/comments/feed/", 2));
    parsed.push_back(make_feed("https://b.example/feed/", 1));
    // A blog feed that carries one comment entry inline.
    ParsedFeed mixed = make_feed("https://c.example/feed/", 2);
    mixed.entries[1].link = "https://c.example/post-0/#comment-7";
    parsed.push_back(mixed);

    auto split = split_comments(parsed);

    CHECK(split.blog.size() == 3);
    CHECK(split.comments.size() == 1);
    CHECK(split.blog.size() + split.comments.size() == parsed.size());

    std::size_t entries_in = 0;
    for (const auto& f : parsed) entries_in += f.entries.size();
    std::size_t entries_out = split.comment_entries_from_blog.size();
    for (const auto& f : split.blog) entries_out += f.entries.size();
    for (const auto& f : split.comments) entries_out += f.entries.size();
    CHECK(entries_in == entries_out);

    REQUIRE(split.comment_entries_from_blog.size() == 1);
    CHECK(split.comment_entries_from_blog[0].parent_rss_url == "https://c.example/feed/");
    // The mixed feed stays on the blog side minus that entry.
    bool found_mixed = false;
    for (const auto& f : split.blog)
        if (f.feed.rss_url == "https://c.example/feed/") {
            found_mixed = true;
            CHECK(f.entries.size() == 1);
        }
    CHECK(found_mixed);
}

TEST_CASE("record ids are stable and distinct") {
    CHECK(container_record_id("https://a.example/feed/") ==
          container_record_id("https://a.example/feed/"));
    CHECK(container_record_id("https://WWW.a.example/feed") ==
          container_record_id("https://a.example/feed/"));
    CHECK(container_record_id("https://a.example/feed/") !=
          container_record_id("https://b.example/feed/"));
    CHECK(container_record_id("https://a.example/feed/").size() == 16);

    EntryRecord by_id;
    by_id.entry_id = "guid-1";
    EntryRecord by_link;
    by_link.link = "https://a.example/p/";
    EntryRecord by_title;
    by_title.title = "Only a title";
    std::string parent = container_record_id("https://a.example/feed/");
    std::set<std::string> ids = {item_record_id(by_id, parent), item_record_id(by_link, parent),
                                 item_record_id(by_title, parent)};
    CHECK(ids.size() == 3);
    // Title-keyed ids depend on the parent.
    CHECK(item_record_id(by_title, parent) !=
          item_record_id(by_title, container_record_id("https://b.example/feed/")));
    // Id-keyed ids do not.
    CHECK(item_record_id(by_id, parent) ==
          item_record_id(by_id, container_record_id("https://b.example/feed/")));
}

TEST_CASE("convert_feed maps fields into a container record") {
    FeedRecord f;
    f.title = "  My Blog  ";
    f.subtitle = "<p>Thoughts &amp; notes</p>";
    f.blog_url = "https://a.example/";
    f.rss_url = "https://a.example/feed/";
    f.language = "pt-BR";
    f.last_updated_raw = "Wed, 17 Aug 2016 03:54:00 +0000";
    f.last_updated = parse_datetime(*f.last_updated_raw);

    NormalizedRecord r = convert_feed(f);
    CHECK(r.kind == "container");
    CHECK(r.record_id == container_record_id(f.rss_url));
    CHECK(r.title == "My Blog");
    CHECK(r.abstract == std::string("Thoughts & notes"));
    CHECK(r.languages == std::vector<std::string>{"por"});
    CHECK(r.urls == std::vector<std::string>{"https://a.example/", "https://a.example/feed/"});
    CHECK(r.publication_date == f.last_updated);
    CHECK_FALSE(r.parent_record_id.has_value());
    CHECK(r.source == "blog");
}

TEST_CASE("convert_feed title fallbacks: host, then rss url") {
    FeedRecord f;
    f.rss_url = "https://quiet.example/feed/";
    f.blog_url = "https://quiet.example/";
    CHECK(convert_feed(f).title == "quiet.example");

    FeedRecord g;
    g.rss_url = "not a parseable url";
    CHECK(convert_feed(g).title == "not a parseable url");
}

TEST_CASE("convert_entry abstract comes from summary only, never content") {
    NormalizedRecord parent;
    parent.record_id = container_record_id("https://a.example/feed/");
    parent.languages = {"eng"};

    EntryRecord e;
    e.title = "A post";
    e.link = "https://a.example/p/";
    e.summary = "<b>short</b> summary";
    e.content = "<p>very long body that must not become the abstract</p>";
    NormalizedRecord r = convert_entry(e, parent);
    CHECK(r.kind == "item");
    CHECK(r.abstract == std::string("short summary"));
    CHECK(r.parent_record_id == parent.record_id);
    CHECK(r.languages == parent.languages);
    CHECK(r.urls == std::vector<std::string>{"https://a.example/p/"});

    EntryRecord no_summary;
    no_summary.title = "No summary";
    no_summary.content = "<p>body</p>";
    CHECK_FALSE(convert_entry(no_summary, parent).abstract.has_value());
}

TEST_CASE("convert_entry title fallbacks: abstract prefix, then link") {
    NormalizedRecord parent;
    parent.record_id = "p";

    EntryRecord e;
    e.summary = "This summary becomes the title when the entry has none.";
    e.link = "https://a.example/p/";
    NormalizedRecord r = convert_entry(e, parent);
    CHECK(r.title.substr(0, 12) == "This summary");

    EntryRecord only_link;
    only_link.link = "https://a.example/q/";
    CHECK(convert_entry(only_link, parent).title == "https://a.example/q/");
}

TEST_CASE("convert_entry keywords and authors carry over") {
    NormalizedRecord parent;
    parent.record_id = "p";
    EntryRecord e;
    e.title = "t";
    e.tags = {"politics", "data"};
    e.authors = {"Anna", "Kim"};
    e.publication_date_raw = "2022-11-16 09:57:58";
    e.publication_date = parse_datetime(*e.publication_date_raw);
    NormalizedRecord r = convert_entry(e, parent);
    CHECK(r.keywords == e.tags);
    CHECK(r.authors == e.authors);
    CHECK(r.publication_date == e.publication_date);
}

TEST_CASE("convert_one emits container first, items parented") {
    ParsedFeed f = make_feed("https://a.example/feed/", 2);
    auto records = convert_one(f);
    REQUIRE(records.size() == 3);
    CHECK(records[0].kind == "container");
    for (std::size_t i = 1; i < records.size(); ++i) {
        CHECK(records[i].kind == "item");
        CHECK(records[i].parent_record_id == records[0].record_id);
    }
}

TEST_CASE("convert_corpus: partition law and parent resolvability") {
    std::vector<ParsedFeed> parsed;
    parsed.push_back(make_feed("https://a.example/feed/", 3));
    parsed.push_back(make_feed("https://a.example/comments/feed/", 2));
    ParsedFeed mixed = make_feed("https://c.example/feed/", 2);
    mixed.entries[1].link = "https://c.example/post-0/#comment-7";
    parsed.push_back(mixed);

    auto split = split_comments(parsed);
    auto out = convert_corpus(split);

    // Totals: every feed and entry appears exactly once across both files.
    std::size_t feeds_in = parsed.size();
    std::size_t entries_in = 0;
    for (const auto& f : parsed) entries_in += f.entries.size();
    std::size_t containers = 0, items = 0;
    std::set<std::string> all_ids;
    std::map<std::string, std::string> parent_of;
    auto tally = [&](const std::vector<NormalizedRecord>& recs) {
        for (const auto& r : recs) {
            all_ids.insert(r.record_id);
            if (r.kind == "container") ++containers;
            else {
                ++items;
                REQUIRE(r.parent_record_id.has_value());
                parent_of[r.record_id] = *r.parent_record_id;
            }
        }
    };
    tally(out.records);
    tally(out.comments);
    CHECK(containers == feeds_in);
    CHECK(items == entries_in);
    CHECK(all_ids.size() == containers + items);  // no id collisions, no double emission

    // Every item's parent exists in the union of the two outputs.
    for (const auto& [id, parent] : parent_of) CHECK(all_ids.count(parent) == 1);

    // Outputs are sorted by record_id.
    auto is_sorted = [](const std::vector<NormalizedRecord>& recs) {
        return std::is_sorted(recs.begin(), recs.end(),
                              [](const NormalizedRecord& a, const NormalizedRecord& b) {
                                  return a.record_id < b.record_id;
                              });
    };
    CHECK(is_sorted(out.records));
    CHECK(is_sorted(out.comments));

    // The inline comment entry landed on the comment side, parented to the
    // blog container it came from.
    bool found = false;
    std::string c_container = container_record_id("https://c.example/feed/");
    for (const auto& r : out.comments)
        if (r.kind == "item" && r.parent_record_id == c_container) found = true;
    CHECK(found);
}

TEST_CASE("records JSON round trip preserves everything") {
    ParsedFeed f = make_feed("https://a.example/feed/", 2);
    f.entries[0].publication_date_raw = "2022-11-16 09:57:58";
    f.entries[0].publication_date = parse_datetime("2022-11-16 09:57:58");
    auto recs = convert_one(f);
    std::string json = records_to_json(recs);
    auto back = records_from_json(json);
    REQUIRE(back.size() == recs.size());
    CHECK(records_to_json(back) == json);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].record_id == recs[i].record_id);
        CHECK(back[i].kind == recs[i].kind);
        CHECK(back[i].title == recs[i].title);
        CHECK(back[i].abstract == recs[i].abstract);
        CHECK(back[i].publication_date == recs[i].publication_date);
        CHECK(back[i].parent_record_id == recs[i].parent_record_id);
    }
    CHECK_THROWS_AS(records_from_json("{}"), std::runtime_error);
}

TEST_CASE("parse_rss_dump reads snapshots via metadata and skips broken ones") {
    TempDir dir("dump");
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream out(dir.path() / name, std::ios::binary);
        out << body;
    };
    write("good.xml",
          "<rss version=\"2.0\"><channel><title>Good</title>"
          "<item><title>p</title></item></channel></rss>");
    write("broken.xml", "<rss><channel>");
    write("metadata.json", R"([
      {"url": "https://a.example/feed/", "timestamp": "2023-01-02T03:04:05Z",
       "filename": "good.xml", "status_code": 200, "content_type": "application/rss+xml"},
      {"url": "https://b.example/feed/", "timestamp": "2023-01-02T03:04:06Z",
       "filename": "broken.xml", "status_code": 200, "content_type": "application/rss+xml"},
      {"url": "https://c.example/feed/", "timestamp": "2023-01-02T03:04:07Z",
       "filename": "missing.xml", "status_code": 200, "content_type": "application/rss+xml"}
    ])");

    auto dump = parse_rss_dump(dir.path());
    REQUIRE(dump.corpus.size() == 1);
    CHECK(dump.corpus[0].feed.title == std::string("Good"));
    CHECK(dump.corpus[0].feed.rss_url == "https://a.example/feed/");
    CHECK(dump.corpus[0].feed.fetched_at == "2023-01-02T03:04:05Z");
    CHECK(dump.skipped.size() == 2);

    TempDir empty("nodump");
    CHECK_THROWS_AS(parse_rss_dump(empty.path()), std::runtime_error);
}
