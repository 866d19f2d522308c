#include "doctest.h"

#include <string>
#include <vector>

#include "corpus.hpp"

using namespace feedpipe;

namespace {

std::string make_xml(int idx, int entries) {
    std::string xml = "<?xml version=\"1.0\"?><rss version=\"2.0\"><channel>";
    xml += "<title>Blog " + std::to_string(idx) + "</title>";
    xml += "<link>https://blog" + std::to_string(idx) + ".example/</link>";
    xml += "<language>en-US</language>";
    for (int e = 0; e < entries; ++e) {
        xml += "<item><title>Post " + std::to_string(e) + " &#8212; notes</title>";
        xml += "<guid>g-" + std::to_string(idx) + "-" + std::to_string(e) + "</guid>";
        xml += "<pubDate>Wed, 17 Aug 2016 03:54:00 +0000</pubDate>";
        xml += "<description><![CDATA[Summary <b>" + std::to_string(e) + "</b>]]></description>";
        xml += "<category>tag" + std::to_string(e % 3) + "</category></item>";
    }
    xml += "</channel></rss>";
    return xml;
}

std::vector<SnapshotInput> make_inputs(int n) {
    std::vector<SnapshotInput> inputs;
    for (int i = 0; i < n; ++i) {
        SnapshotInput s;
        s.bytes = (i % 7 == 3) ? "<broken" : make_xml(i, 5);  // some failures mixed in
        s.rss_url = "https://blog" + std::to_string(i) + ".example/feed/";
        s.fetched_at = "2023-01-01T00:00:00Z";
        inputs.push_back(s);
    }
    return inputs;
}

}  // namespace

TEST_CASE("parse_many matches the serial reference, including failures") {
    auto inputs = make_inputs(40);
    auto par = parse_many(inputs);
    auto ser = parse_many_serial(inputs);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        INFO("index " << i);
        CHECK(par[i].ok == ser[i].ok);
        CHECK(par[i].error == ser[i].error);
        if (par[i].ok) {
            CHECK(par[i].parsed.feed.title == ser[i].parsed.feed.title);
            CHECK(par[i].parsed.feed.rss_url == ser[i].parsed.feed.rss_url);
            CHECK(par[i].parsed.feed.fetched_at == "2023-01-01T00:00:00Z");
            REQUIRE(par[i].parsed.entries.size() == ser[i].parsed.entries.size());
            for (std::size_t e = 0; e < par[i].parsed.entries.size(); ++e) {
                CHECK(par[i].parsed.entries[e].title == ser[i].parsed.entries[e].title);
                CHECK(par[i].parsed.entries[e].entry_id == ser[i].parsed.entries[e].entry_id);
            }
        }
    }
}

TEST_CASE("convert_many matches the serial reference") {
    auto inputs = make_inputs(30);
    std::vector<ParsedFeed> feeds;
    for (auto& r : parse_many_serial(inputs))
        if (r.ok) feeds.push_back(r.parsed);
    REQUIRE_FALSE(feeds.empty());

    auto par = convert_many(feeds);
    auto ser = convert_many_serial(feeds);
    REQUIRE(par.size() == ser.size());
    std::string a, b;
    for (std::size_t i = 0; i < par.size(); ++i) {
        a += records_to_json(par[i]);
        b += records_to_json(ser[i]);
    }
    CHECK(a == b);
}

TEST_CASE("empty input") {
    CHECK(parse_many({}).empty());
    CHECK(convert_many({}).empty());
}
