#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fetcher.hpp"
#include "url.hpp"
#include "fakes.hpp"
#include "mock_server.hpp"

using namespace feedpipe;
using testsupport::FakeSleeper;
using testsupport::MockServer;
using testsupport::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// True when some permutation of `urls` has no equal adjacent hosts.
/// Feasible iff max host multiplicity <= ceil(n/2).
bool interleavable(const std::vector<std::string>& urls) {
    std::map<std::string, std::size_t> counts;
    for (const auto& u : urls) counts[host_of(u)]++;
    std::size_t max_count = 0;
    for (const auto& [h, c] : counts) max_count = std::max(max_count, c);
    return max_count <= (urls.size() + 1) / 2;
}

bool no_adjacent_same_host(const std::vector<std::string>& order) {
    for (std::size_t i = 1; i < order.size(); ++i)
        if (host_of(order[i - 1]) == host_of(order[i])) return false;
    return true;
}

}  // namespace

TEST_CASE("extract_feed_urls unions rss_links in order without duplicates") {
    std::string json = R"([
      {"url": "https://a.example/", "rss_links": ["https://a.example/feed", "https://a.example/atom"]},
      {"url": "https://b.example/", "rss_links": ["https://b.example/feed", "https://a.example/feed"]},
      {"url": "https://c.example/", "rss_links": []}
    ])";
    auto urls = extract_feed_urls(json);
    REQUIRE(urls.size() == 3);
    CHECK(urls[0] == "https://a.example/feed");
    CHECK(urls[1] == "https://a.example/atom");
    CHECK(urls[2] == "https://b.example/feed");
}

TEST_CASE("extract_feed_urls rejects malformed input with the record index") {
    CHECK_THROWS_AS(extract_feed_urls("not json"), std::runtime_error);
    CHECK_THROWS_AS(extract_feed_urls("{}"), std::runtime_error);
    try {
        extract_feed_urls(R"([{"url": "x", "rss_links": ["ok"]}, {"url": "y"}])");
        FAIL("expected throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
    CHECK_THROWS_AS(extract_feed_urls(R"([{"rss_links": "not-a-list"}])"), std::runtime_error);
    CHECK_THROWS_AS(extract_feed_urls(R"([{"rss_links": [42]}])"), std::runtime_error);
}

TEST_CASE("politeness_order is a deterministic permutation") {
    std::vector<std::string> urls = {
        "https://a.example/1", "https://a.example/2", "https://b.example/1",
        "https://c.example/1", "https://b.example/2",
    };
    auto first = politeness_order(urls, 42);
    auto second = politeness_order(urls, 42);
    CHECK(first == second);
    auto sorted_in = urls;
    auto sorted_out = first;
    std::sort(sorted_in.begin(), sorted_in.end());
    std::sort(sorted_out.begin(), sorted_out.end());
    CHECK(sorted_in == sorted_out);
    auto other_seed = politeness_order(urls, 43);
    auto sorted_other = other_seed;
    std::sort(sorted_other.begin(), sorted_other.end());
    CHECK(sorted_other == sorted_in);
}

TEST_CASE("politeness_order separates same-host URLs whenever possible") {
    std::mt19937_64 rng(7);
    const std::vector<std::string> hosts = {"https://a.example/", "https://b.example/",
                                            "https://c.example/", "https://d.example/"};
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 1 + rng() % 8;
        std::vector<std::string> urls;
        for (std::size_t i = 0; i < n; ++i)
            urls.push_back(hosts[rng() % hosts.size()] + "p" + std::to_string(i));
        auto order = politeness_order(urls, rng());
        auto a = urls, b = order;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        REQUIRE(a == b);
        if (interleavable(urls)) {
            INFO("trial " << trial << " n=" << n);
            CHECK(no_adjacent_same_host(order));
        }
    }
}

TEST_CASE("politeness_order handles degenerate inputs") {
    CHECK(politeness_order({}, 1).empty());
    CHECK(politeness_order({"https://a.example/x"}, 1) ==
          std::vector<std::string>{"https://a.example/x"});
    // All one host: infeasible; still a permutation.
    std::vector<std::string> same = {"https://a.example/1", "https://a.example/2",
                                     "https://a.example/3"};
    auto order = politeness_order(same, 9);
    auto s1 = same, s2 = order;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    CHECK(s1 == s2);
}

TEST_CASE("load_rss writes a snapshot for an XML response") {
    MockServer server;
    server.set_xml("/feed", "<rss version=\"2.0\"><channel></channel></rss>");
    TempDir dir("loadrss");
    auto client = make_httplib_client({});
    FakeSleeper sleeper;
    auto out = load_rss(server.url("/feed"), dir.path(), *client, sleeper);
    REQUIRE(out.ok);
    CHECK(out.meta.status_code == 200);
    CHECK(out.meta.content_type == "application/rss+xml");
    CHECK(out.meta.url == server.url("/feed"));
    CHECK_FALSE(out.meta.filename.empty());
    auto file = dir.path() / out.meta.filename;
    REQUIRE(std::filesystem::exists(file));
    CHECK(slurp(file) == "<rss version=\"2.0\"><channel></channel></rss>");
}

TEST_CASE("load_rss accepts any content type containing xml") {
    MockServer server;
    server.set_xml("/a", "<rss/>", "text/xml");
    server.set_xml("/b", "<feed/>", "application/xml");
    server.set_xml("/c", "<rss/>", "text/xml; charset=UTF-8");
    server.set_xml("/d", "<feed/>", "application/atom+xml");
    TempDir dir("ctypes");
    auto client = make_httplib_client({});
    FakeSleeper sleeper;
    for (const char* p : {"/a", "/b", "/c", "/d"}) {
        auto out = load_rss(server.url(p), dir.path(), *client, sleeper);
        INFO("path " << p);
        CHECK(out.ok);
    }
}

TEST_CASE("load_rss rejects non-XML content types without writing a file") {
    MockServer server;
    server.set("/html", {200, "<html>page</html>", "text/html", ""});
    server.set("/json", {200, "{}", "application/json", ""});
    server.set("/plain", {200, "stuff", "text/plain", ""});
    TempDir dir("reject");
    auto client = make_httplib_client({});
    FakeSleeper sleeper;
    for (const char* p : {"/html", "/json", "/plain"}) {
        auto out = load_rss(server.url(p), dir.path(), *client, sleeper);
        INFO("path " << p);
        CHECK_FALSE(out.ok);
        CHECK(out.reason.find("content type") != std::string::npos);
    }
    CHECK(std::filesystem::is_empty(dir.path()));
}

TEST_CASE("load_rss reports retry exhaustion and permanent failures") {
    MockServer server;
    server.set("/down", {500, "e", "text/html", ""});
    server.set("/gone", {404, "e", "text/html", ""});
    TempDir dir("fail");
    auto client = make_httplib_client({});
    FakeSleeper sleeper;

    auto down = load_rss(server.url("/down"), dir.path(), *client, sleeper);
    CHECK_FALSE(down.ok);
    CHECK(down.attempts == 3);

    auto gone = load_rss(server.url("/gone"), dir.path(), *client, sleeper);
    CHECK_FALSE(gone.ok);
    CHECK(gone.attempts == 1);
    CHECK(std::filesystem::is_empty(dir.path()));
}

TEST_CASE("load_rss rejects an empty 2xx body") {
    MockServer server;
    server.set_xml("/empty", "");
    TempDir dir("empty");
    auto client = make_httplib_client({});
    FakeSleeper sleeper;
    auto out = load_rss(server.url("/empty"), dir.path(), *client, sleeper);
    CHECK_FALSE(out.ok);
    CHECK(std::filesystem::is_empty(dir.path()));
}

TEST_CASE("run_fetch conserves inputs across downloads and errors") {
    MockServer server;
    server.set_xml("/f1", "<rss><channel><title>one</title></channel></rss>");
    server.set_xml("/f2", "<feed><title>two</title></feed>", "application/atom+xml");
    server.set("/bad", {200, "<html/>", "text/html", ""});
    server.set("/gone", {404, "x", "text/html", ""});

    std::string discovery = std::string("[") +
        R"({"url": "https://src.example/", "rss_links": [")" + server.url("/f1") + R"(", ")" +
        server.url("/f2") + R"(", ")" + server.url("/bad") + R"(", ")" + server.url("/gone") +
        R"("]}])";

    TempDir dir("runfetch");
    auto client = make_httplib_client({});
    FakeSleeper sleeper;
    FetchOptions opt;
    opt.seed = 11;
    auto result = run_fetch(discovery, dir.path(), *client, sleeper, opt);

    CHECK(result.downloaded == 2);
    CHECK(result.errors == 2);
    CHECK(result.downloaded + result.errors == 4);
    CHECK(result.metadata.size() == 2);
    CHECK(result.error_urls.size() == 2);

    // metadata.json and errors.json are written beside the snapshots.
    REQUIRE(std::filesystem::exists(dir.path() / "metadata.json"));
    REQUIRE(std::filesystem::exists(dir.path() / "errors.json"));

    // Every metadata row points at a real, non-empty snapshot file.
    std::set<std::string> names;
    for (const auto& m : result.metadata) {
        auto file = dir.path() / m.filename;
        REQUIRE(std::filesystem::exists(file));
        CHECK(std::filesystem::file_size(file) > 0);
        names.insert(m.filename);
    }
    CHECK(names.size() == result.metadata.size());

    // No temp files or strays: exactly snapshots + the two JSON documents.
    std::size_t entries = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
        ++entries;
        CHECK(e.path().extension() != ".tmp");
    }
    CHECK(entries == result.downloaded + 2);
}

TEST_CASE("run_fetch throws on malformed discovery JSON") {
    TempDir dir("badjson");
    auto client = make_httplib_client({});
    FakeSleeper sleeper;
    CHECK_THROWS_AS(run_fetch("nonsense", dir.path(), *client, sleeper), std::runtime_error);
}

TEST_CASE("fetch metadata and errors serialize as JSON arrays") {
    FetchMetadata m;
    m.url = "https://a.example/feed";
    m.timestamp = "2023-01-01T00:00:00Z";
    m.filename = "abc_20230101T000000.xml";
    m.status_code = 200;
    m.content_type = "application/rss+xml";
    std::string mj = fetch_metadata_to_json({m});
    CHECK(mj.find("\"url\"") != std::string::npos);
    CHECK(mj.find("\"filename\"") != std::string::npos);

    std::string ej = fetch_errors_to_json({{"https://b.example/feed", "content type not XML: text/html"}});
    CHECK(ej.find("https://b.example/feed") != std::string::npos);
    CHECK(ej.find("content type not XML") != std::string::npos);
}
