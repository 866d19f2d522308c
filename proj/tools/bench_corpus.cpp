// Times the parallel corpus kernels against their serial references on a
// synthesized snapshot corpus and verifies both produce identical output.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "corpus.hpp"

using namespace feedpipe;

namespace {

std::string make_feed_xml(int feed_idx, int entries) {
    std::string xml =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<rss version=\"2.0\" xmlns:dc=\"http://purl.org/dc/elements/1.1/\">\n<channel>\n";
    xml += "<title>Synthetic feed " + std::to_string(feed_idx) + "</title>\n";
    xml += "<description>Benchmark corpus feed number " + std::to_string(feed_idx) +
           " with a reasonably long subtitle to push some bytes through the parser</description>\n";
    xml += "<link>https://bench" + std::to_string(feed_idx) + ".example.org</link>\n";
    xml += "<lastBuildDate>Wed, 17 Aug 2016 03:54:00 +0000</lastBuildDate>\n";
    xml += "<language>en-US</language>\n";
    for (int e = 0; e < entries; ++e) {
        std::string id = std::to_string(feed_idx) + "-" + std::to_string(e);
        xml += "<item>\n<title>Post " + id + " about elections &amp; parties</title>\n";
        xml += "<guid>https://bench" + std::to_string(feed_idx) + ".example.org/?p=" + id +
               "</guid>\n";
        xml += "<link>https://bench" + std::to_string(feed_idx) + ".example.org/post/" + id +
               "</link>\n";
        xml += "<pubDate>Wed, 16 Nov 2022 09:57:58 +0000</pubDate>\n";
        xml += "<dc:creator>Author " + std::to_string(e % 7) + "</dc:creator>\n";
        xml += "<description>In this year&#8217;s midterm elections, &lt;b&gt;turnout&lt;/b&gt; "
               "was discussed at length in post " + id + ". <![CDATA[Some <i>inline</i> markup "
               "body with enough text to make entity decoding and tag stripping do real "
               "work.]]></description>\n";
        xml += "<category>Elections and party politics</category>\n";
        xml += "<category>Topic " + std::to_string(e % 13) + "</category>\n";
        xml += "<comments>https://bench" + std::to_string(feed_idx) +
               ".example.org/post/" + id + "#comments</comments>\n</item>\n";
    }
    xml += "</channel>\n</rss>\n";
    return xml;
}

template <typename F>
long long time_ms(F&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feedpipe corpus kernel benchmark: parallel vs serial reference"};
    int feeds = 200;
    int entries = 50;
    int repeat = 3;
    app.add_option("--feeds", feeds, "Feeds in the synthetic corpus");
    app.add_option("--entries", entries, "Entries per feed");
    app.add_option("--repeat", repeat, "Timed repetitions (best run reported)");
    CLI11_PARSE(app, argc, argv);

    std::vector<SnapshotInput> inputs;
    inputs.reserve(feeds);
    for (int i = 0; i < feeds; ++i) {
        SnapshotInput in;
        in.bytes = make_feed_xml(i, entries);
        in.rss_url = "https://bench" + std::to_string(i) + ".example.org/feed/";
        in.fetched_at = "2024-01-01T00:00:00Z";
        inputs.push_back(std::move(in));
    }
    std::printf("corpus: %d feeds x %d entries\n", feeds, entries);

    std::vector<ParseFeedResult> serial_parsed, parallel_parsed;
    long long parse_serial_ms = -1, parse_parallel_ms = -1;
    for (int r = 0; r < repeat; ++r) {
        long long ms = time_ms([&] { serial_parsed = parse_many_serial(inputs); });
        if (parse_serial_ms < 0 || ms < parse_serial_ms)
            parse_serial_ms = ms;
        ms = time_ms([&] { parallel_parsed = parse_many(inputs); });
        if (parse_parallel_ms < 0 || ms < parse_parallel_ms)
            parse_parallel_ms = ms;
    }

    std::vector<ParsedFeed> corpus;
    corpus.reserve(serial_parsed.size());
    for (auto& r : serial_parsed)
        corpus.push_back(r.parsed);

    std::vector<std::vector<NormalizedRecord>> serial_conv, parallel_conv;
    long long conv_serial_ms = -1, conv_parallel_ms = -1;
    for (int r = 0; r < repeat; ++r) {
        long long ms = time_ms([&] { serial_conv = convert_many_serial(corpus); });
        if (conv_serial_ms < 0 || ms < conv_serial_ms)
            conv_serial_ms = ms;
        ms = time_ms([&] { parallel_conv = convert_many(corpus); });
        if (conv_parallel_ms < 0 || ms < conv_parallel_ms)
            conv_parallel_ms = ms;
    }

    std::vector<ParsedFeed> parallel_corpus;
    parallel_corpus.reserve(parallel_parsed.size());
    for (auto& r : parallel_parsed)
        parallel_corpus.push_back(r.parsed);
    bool parse_equal = parsed_corpus_to_json(corpus) == parsed_corpus_to_json(parallel_corpus);

    std::vector<NormalizedRecord> flat_serial, flat_parallel;
    for (auto& batch : serial_conv)
        flat_serial.insert(flat_serial.end(), batch.begin(), batch.end());
    for (auto& batch : parallel_conv)
        flat_parallel.insert(flat_parallel.end(), batch.begin(), batch.end());
    bool conv_equal = records_to_json(flat_serial) == records_to_json(flat_parallel);

    auto speedup = [](long long serial, long long parallel) {
        return parallel > 0 ? static_cast<double>(serial) / static_cast<double>(parallel) : 0.0;
    };
    std::printf("parse:   serial %5lld ms   parallel %5lld ms   speedup %.2fx   identical: %s\n",
                parse_serial_ms, parse_parallel_ms, speedup(parse_serial_ms, parse_parallel_ms),
                parse_equal ? "yes" : "NO");
    std::printf("convert: serial %5lld ms   parallel %5lld ms   speedup %.2fx   identical: %s\n",
                conv_serial_ms, conv_parallel_ms, speedup(conv_serial_ms, conv_parallel_ms),
                conv_equal ? "yes" : "NO");
    return parse_equal && conv_equal ? 0 : 1;
}
