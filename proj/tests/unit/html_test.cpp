#include "doctest.h"

#include "html.hpp"

using namespace feedpipe;

TEST_CASE("scan_tags finds tags with attributes in any style") {
    auto tags = scan_tags(
        "<link rel=\"alternate\" type='application/rss+xml' href=/feed>"
        "<LINK REL=ALTERNATE>");
    REQUIRE(tags.size() == 2);
    CHECK(tags[0].name == "link");
    CHECK(tag_attr(tags[0], "rel") == std::string("alternate"));
    CHECK(tag_attr(tags[0], "type") == std::string("application/rss+xml"));
    CHECK(tag_attr(tags[0], "href") == std::string("/feed"));
    CHECK(tags[1].name == "link");
    CHECK(tag_attr(tags[1], "rel") == std::string("ALTERNATE"));
    CHECK_FALSE(tag_attr(tags[1], "href").has_value());
}

TEST_CASE("scan_tags skips comments, doctype and script bodies") {
    // The script body and its closing tag are swallowed whole.
    auto tags = scan_tags(
        "<!DOCTYPE html><!-- <a href=x> --><script>var a = '<b>';</script><p>");
    REQUIRE(tags.size() == 2);
    CHECK(tags[0].name == "script");
    CHECK(tags[1].name == "p");
}

TEST_CASE("scan_tags decodes entities in attribute values") {
    auto tags = scan_tags("<a href=\"/x?a=1&amp;b=2\">");
    REQUIRE(tags.size() == 1);
    CHECK(tag_attr(tags[0], "href") == std::string("/x?a=1&b=2"));
}

TEST_CASE("scan_anchors collects href and visible text") {
    auto anchors = scan_anchors(
        "<p>intro</p><a href=\"/feed\">RSS <b>Feed</b></a> and "
        "<a href='https://other.example/atom.xml'>subscribe</a><a>no href</a>");
    REQUIRE(anchors.size() == 2);
    CHECK(anchors[0].href == "/feed");
    CHECK(anchors[0].text == "RSS Feed");
    CHECK(anchors[1].href == "https://other.example/atom.xml");
    CHECK(anchors[1].text == "subscribe");
}

TEST_CASE("decode_entities named, decimal and hex") {
    CHECK(decode_entities("Tom &amp; Jerry") == "Tom & Jerry");
    CHECK(decode_entities("&lt;tag&gt;") == "<tag>");
    CHECK(decode_entities("it&#8217;s") == "it\xE2\x80\x99s");
    CHECK(decode_entities("it&#x2019;s") == "it\xE2\x80\x99s");
    // nbsp maps to a plain space so whitespace collapsing can normalize it.
    CHECK(decode_entities("&quot;q&quot; &apos;a&apos; x&nbsp;y") == "\"q\" 'a' x y");
    CHECK(decode_entities("&unknownname; stays") == "&unknownname; stays");
}

TEST_CASE("strip_markup removes tags and tidies whitespace") {
    CHECK(strip_markup("<p>Hello <b>world</b></p>") == "Hello world");
    CHECK(strip_markup("  spaced\n\n  out  ") == "spaced out");
    CHECK(strip_markup("a &amp; b") == "a & b");
    CHECK(strip_markup("") == "");
}

TEST_CASE("strip_markup reaches a fixpoint on nested escapes") {
    // One decode pass would turn &lt;b&gt; into a live tag; the fixpoint
    // guarantees no '<letter' survives in the output.
    std::string once = strip_markup("&lt;p&gt;text&lt;/p&gt;");
    CHECK(once.find("<p") == std::string::npos);
    CHECK(strip_markup(once) == once);

    std::string tricky = strip_markup("a &lt;script&gt;alert(1)&lt;/script&gt; b");
    CHECK(strip_markup(tricky) == tricky);
}

TEST_CASE("strip_markup idempotent on plain text") {
    std::string s = "Already clean text, punctuation: fine.";
    CHECK(strip_markup(s) == s);
}

TEST_CASE("strip_markup keeps bare less-than that is not a tag") {
    std::string out = strip_markup("3 < 5 and 7 > 2");
    CHECK(out.find('5') != std::string::npos);
    CHECK(out.find('7') != std::string::npos);
}
