#include "doctest.h"

#include <stdexcept>

#include "feed_parser.hpp"

using namespace feedpipe;

namespace {

const char* kRssSample = R"(<?xml version="1.0" encoding="UTF-8"?>
<rss version="2.0"
     xmlns:content="http://purl.org/rss/1.0/modules/content/"
     xmlns:dc="http://purl.org/dc/elements/1.1/">
  <channel>
    <title>Political Science Zurich</title>
    <description>Notes on Swiss politics</description>
    <link>https://blog.example.ch/</link>
    <lastBuildDate>Wed, 17 Aug 2016 03:54:00 +0000</lastBuildDate>
    <language>de</language>
    <item>
      <title>Elections &#8212; a look back</title>
      <guid isPermaLink="false">https://blog.example.ch/?p=101</guid>
      <link>https://blog.example.ch/elections/</link>
      <pubDate>Wed, 17 Aug 2016 03:54:00 +0000</pubDate>
      <dc:creator>Anna Muster</dc:creator>
      <description>A short summary.</description>
      <content:encoded><![CDATA[<p>Full <b>content</b> here.</p>]]></content:encoded>
      <category>politics</category>
      <category domain="tags">elections</category>
      <comments>https://blog.example.ch/elections/#comments</comments>
    </item>
    <item>
      <title>Second post</title>
      <link>https://blog.example.ch/second/</link>
    </item>
  </channel>
</rss>)";

const char* kAtomSample = R"(<?xml version="1.0" encoding="UTF-8"?>
<feed xmlns="http://www.w3.org/2005/Atom" xml:lang="en-US">
  <title>Research Updates</title>
  <subtitle>What the lab is reading</subtitle>
  <link rel="self" href="https://lab.example/atom.xml"/>
  <link rel="alternate" type="text/html" href="https://lab.example/"/>
  <updated>2022-11-16T09:57:58Z</updated>
  <entry>
    <title>New dataset</title>
    <id>urn:uuid:1225c695-cfb8-4ebb-aaaa-80da344efa6a</id>
    <link href="https://lab.example/posts/dataset"/>
    <published>2022-11-16T09:57:58Z</published>
    <author><name>Kim Lee</name></author>
    <summary>We published a dataset.</summary>
    <content type="html">&lt;p&gt;Details inside.&lt;/p&gt;</content>
    <category term="data"/>
  </entry>
</feed>)";

}  // namespace

TEST_CASE("parse RSS 2.0 feed fields") {
    auto result = parse_feed_document(kRssSample, "https://blog.example.ch/feed/");
    REQUIRE(result.ok);
    const FeedRecord& f = result.parsed.feed;
    CHECK(f.title == std::string("Political Science Zurich"));
    CHECK(f.subtitle == std::string("Notes on Swiss politics"));
    CHECK(f.blog_url == std::string("https://blog.example.ch/"));
    CHECK(f.rss_url == "https://blog.example.ch/feed/");
    CHECK(f.last_updated_raw == std::string("Wed, 17 Aug 2016 03:54:00 +0000"));
    REQUIRE(f.last_updated.has_value());
    CHECK(f.language == std::string("de"));
}

TEST_CASE("parse RSS 2.0 entry fields") {
    auto result = parse_feed_document(kRssSample, "https://blog.example.ch/feed/");
    REQUIRE(result.ok);
    REQUIRE(result.parsed.entries.size() == 2);
    const EntryRecord& e = result.parsed.entries[0];
    CHECK(e.title == std::string("Elections \xE2\x80\x94 a look back"));
    CHECK(e.entry_id == std::string("https://blog.example.ch/?p=101"));
    CHECK(e.link == std::string("https://blog.example.ch/elections/"));
    CHECK(e.publication_date_raw == std::string("Wed, 17 Aug 2016 03:54:00 +0000"));
    REQUIRE(e.publication_date.has_value());
    REQUIRE(e.authors.size() == 1);
    CHECK(e.authors[0] == "Anna Muster");
    CHECK(e.summary == std::string("A short summary."));
    CHECK(e.content == std::string("<p>Full <b>content</b> here.</p>"));
    CHECK(e.tags == std::vector<std::string>{"politics", "elections"});
    CHECK(e.comments_url == std::string("https://blog.example.ch/elections/#comments"));
    CHECK(e.parent_rss_url == "https://blog.example.ch/feed/");
}

TEST_CASE("missing entry fields stay absent without failing") {
    auto result = parse_feed_document(kRssSample, "https://blog.example.ch/feed/");
    REQUIRE(result.ok);
    const EntryRecord& e = result.parsed.entries[1];
    CHECK(e.title == std::string("Second post"));
    CHECK_FALSE(e.entry_id.has_value());
    CHECK_FALSE(e.publication_date_raw.has_value());
    CHECK(e.authors.empty());
    CHECK_FALSE(e.summary.has_value());
    CHECK_FALSE(e.content.has_value());
    CHECK(e.tags.empty());
    CHECK_FALSE(e.comments_url.has_value());
}

TEST_CASE("parse Atom feed and entry fields") {
    auto result = parse_feed_document(kAtomSample, "https://lab.example/atom.xml");
    REQUIRE(result.ok);
    const FeedRecord& f = result.parsed.feed;
    CHECK(f.title == std::string("Research Updates"));
    CHECK(f.subtitle == std::string("What the lab is reading"));
    CHECK(f.blog_url == std::string("https://lab.example/"));  // rel=self skipped
    CHECK(f.last_updated_raw == std::string("2022-11-16T09:57:58Z"));
    REQUIRE(f.last_updated.has_value());
    CHECK(f.language == std::string("en-US"));

    REQUIRE(result.parsed.entries.size() == 1);
    const EntryRecord& e = result.parsed.entries[0];
    CHECK(e.title == std::string("New dataset"));
    CHECK(e.entry_id == std::string("urn:uuid:1225c695-cfb8-4ebb-aaaa-80da344efa6a"));
    CHECK(e.link == std::string("https://lab.example/posts/dataset"));
    REQUIRE(e.publication_date.has_value());
    CHECK(e.authors == std::vector<std::string>{"Kim Lee"});
    CHECK(e.summary == std::string("We published a dataset."));
    CHECK(e.content == std::string("<p>Details inside.</p>"));
    CHECK(e.tags == std::vector<std::string>{"data"});
}

TEST_CASE("feed-level totality: removing any channel field still parses") {
    // Knock out each recognized channel child one at a time.
    const char* victims[] = {"<title>Political Science Zurich</title>",
                             "<description>Notes on Swiss politics</description>",
                             "<link>https://blog.example.ch/</link>",
                             "<lastBuildDate>Wed, 17 Aug 2016 03:54:00 +0000</lastBuildDate>",
                             "<language>de</language>"};
    for (const char* victim : victims) {
        std::string xml = kRssSample;
        auto pos = xml.find(victim);
        REQUIRE(pos != std::string::npos);
        xml.erase(pos, std::string(victim).size());
        auto result = parse_feed_document(xml, "https://blog.example.ch/feed/");
        INFO("removed " << victim);
        REQUIRE(result.ok);
        CHECK(result.parsed.entries.size() == 2);
    }
}

TEST_CASE("entry count is conserved") {
    std::string xml = "<rss version=\"2.0\"><channel><title>t</title>";
    for (int i = 0; i < 37; ++i)
        xml += "<item><title>post " + std::to_string(i) + "</title></item>";
    xml += "</channel></rss>";
    auto result = parse_feed_document(xml, "https://x.example/feed");
    REQUIRE(result.ok);
    CHECK(result.parsed.entries.size() == 37);
}

TEST_CASE("namespaced lookalikes do not shadow core fields") {
    const char* xml = R"(<rss version="2.0"
        xmlns:itunes="http://www.itunes.com/dtds/podcast-1.0.dtd"
        xmlns:media="http://search.yahoo.com/mrss/"
        xmlns:slash="http://purl.org/rss/1.0/modules/slash/">
      <channel>
        <itunes:subtitle>podcast subtitle</itunes:subtitle>
        <title>Real Title</title>
        <item>
          <itunes:author>Wrong Author</itunes:author>
          <media:content url="https://cdn.example/clip.mp4"/>
          <slash:comments>42</slash:comments>
          <title>Real Post</title>
          <itunes:title>Podcast Episode Name</itunes:title>
        </item>
      </channel>
    </rss>)";
    auto result = parse_feed_document(xml, "https://p.example/feed");
    REQUIRE(result.ok);
    CHECK(result.parsed.feed.title == std::string("Real Title"));
    CHECK_FALSE(result.parsed.feed.subtitle.has_value());
    REQUIRE(result.parsed.entries.size() == 1);
    const EntryRecord& e = result.parsed.entries[0];
    CHECK(e.title == std::string("Real Post"));
    CHECK(e.authors.empty());       // itunes:author is not dc:creator
    CHECK_FALSE(e.content.has_value());  // media:content is not content:encoded
    CHECK_FALSE(e.comments_url.has_value());  // slash:comments is a count
}

TEST_CASE("atom entry without summary falls back nowhere; description maps to summary in RSS") {
    const char* xml = R"(<rss version="2.0"><channel><title>t</title>
      <item><description>only a description</description></item>
    </channel></rss>)";
    auto result = parse_feed_document(xml, "https://x.example/feed");
    REQUIRE(result.ok);
    CHECK(result.parsed.entries[0].summary == std::string("only a description"));
    CHECK_FALSE(result.parsed.entries[0].content.has_value());
}

TEST_CASE("unsupported root or broken XML reports an error") {
    auto html = parse_feed_document("<html><body>nope</body></html>", "https://x.example/feed");
    CHECK_FALSE(html.ok);
    CHECK(html.error.find("unsupported root") != std::string::npos);

    auto broken = parse_feed_document("<rss><channel>", "https://x.example/feed");
    CHECK_FALSE(broken.ok);
    CHECK(broken.error.find("byte") != std::string::npos);
}

TEST_CASE("encoding replacements are surfaced") {
    std::string xml = "<rss version=\"2.0\"><channel><title>bad \xFF byte</title></channel></rss>";
    auto result = parse_feed_document(xml, "https://x.example/feed");
    REQUIRE(result.ok);
    CHECK(result.parsed.encoding_replacements > 0);
}

TEST_CASE("parsed corpus JSON round trip") {
    auto rss = parse_feed_document(kRssSample, "https://blog.example.ch/feed/");
    auto atom = parse_feed_document(kAtomSample, "https://lab.example/atom.xml");
    REQUIRE(rss.ok);
    REQUIRE(atom.ok);
    rss.parsed.feed.fetched_at = "2023-01-01T00:00:00Z";
    atom.parsed.feed.fetched_at = "2023-01-01T00:05:00Z";
    std::vector<ParsedFeed> corpus = {rss.parsed, atom.parsed};

    std::string json = parsed_corpus_to_json(corpus);
    auto back = parsed_corpus_from_json(json);
    REQUIRE(back.size() == 2);
    CHECK(parsed_corpus_to_json(back) == json);

    CHECK(back[0].feed.title == corpus[0].feed.title);
    CHECK(back[0].entries.size() == corpus[0].entries.size());
    CHECK(back[0].entries[0].authors == corpus[0].entries[0].authors);
    CHECK(back[0].entries[0].publication_date == corpus[0].entries[0].publication_date);
    CHECK(back[1].feed.language == corpus[1].feed.language);
    CHECK(back[1].feed.fetched_at == "2023-01-01T00:05:00Z");
}

TEST_CASE("parsed_corpus_from_json rejects malformed documents") {
    CHECK_THROWS_AS(parsed_corpus_from_json("{}"), std::runtime_error);
    CHECK_THROWS_AS(parsed_corpus_from_json("[{\"entries\": []}]"), std::runtime_error);
}
