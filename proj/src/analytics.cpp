#include "analytics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

#include "csv.hpp"
#include "strings.hpp"

namespace feedpipe {

namespace {

bool filled(const std::optional<std::string>& v) {
    return v && !trim(*v).empty();
}

// included/denominator as tenths of a percent, rounded half-up.
int tenths(std::size_t included, std::size_t denominator) {
    return static_cast<int>((included * 2000 + denominator) / (2 * denominator));
}

}  // namespace

InclusionReport inclusion_rates(const std::vector<ParsedFeed>& corpus, InclusionLevel level) {
    InclusionReport report;
    report.level = level;

    std::vector<std::pair<std::string, std::size_t>> counts;
    std::size_t unparseable_dates = 0;
    std::string date_field;

    if (level == InclusionLevel::feed) {
        report.denominator = corpus.size();
        date_field = "last updated";
        std::size_t title = 0, subtitle = 0, blog_url = 0, rss_url = 0, last_updated = 0,
                    language = 0;
        for (const ParsedFeed& pf : corpus) {
            const FeedRecord& f = pf.feed;
            title += filled(f.title);
            subtitle += filled(f.subtitle);
            blog_url += filled(f.blog_url);
            rss_url += !trim(f.rss_url).empty();
            last_updated += filled(f.last_updated_raw);
            language += filled(f.language);
            unparseable_dates += filled(f.last_updated_raw) && !f.last_updated;
        }
        counts = {{"title", title},           {"subtitle", subtitle}, {"blog url", blog_url},
                  {"rss url", rss_url},       {"last updated", last_updated},
                  {"language", language}};
    } else {
        date_field = "publication date";
        std::size_t title = 0, id = 0, link = 0, pub_date = 0, authors = 0, summary = 0,
                    content = 0, tags = 0, comments = 0, total = 0;
        for (const ParsedFeed& pf : corpus) {
            for (const EntryRecord& e : pf.entries) {
                ++total;
                title += filled(e.title);
                id += filled(e.entry_id);
                link += filled(e.link);
                pub_date += filled(e.publication_date_raw);
                authors += !e.authors.empty();
                summary += filled(e.summary);
                content += filled(e.content);
                tags += !e.tags.empty();
                comments += filled(e.comments_url);
                unparseable_dates += filled(e.publication_date_raw) && !e.publication_date;
            }
        }
        report.denominator = total;
        counts = {{"title", title},     {"id", id},           {"link", link},
                  {"publication date", pub_date},             {"authors", authors},
                  {"summary", summary}, {"content", content}, {"tags", tags},
                  {"comments", comments}};
    }

    if (report.denominator > 0)
        for (const auto& [name, included] : counts)
            report.rate_tenths.emplace_back(name, tenths(included, report.denominator));
    report.unparseable.emplace_back(date_field, unparseable_dates);
    return report;
}

std::string inclusion_report_to_json(const InclusionReport& report) {
    nlohmann::ordered_json doc;
    doc["level"] = report.level == InclusionLevel::feed ? "feed" : "entry";
    doc["denominator"] = report.denominator;
    nlohmann::ordered_json rates = nlohmann::ordered_json::object();
    for (const auto& [name, value] : report.rate_tenths)
        rates[name] = value / 10.0;
    doc["rates"] = std::move(rates);
    nlohmann::ordered_json unparseable = nlohmann::ordered_json::object();
    for (const auto& [name, count] : report.unparseable)
        unparseable[name] = count;
    doc["unparseable"] = std::move(unparseable);
    return doc.dump(2) + "\n";
}

namespace {

bool is_placeholder_title(const std::string& title) {
    std::string t = trim(title);
    return iequals(t, "not available") || iequals(t, "no title") || iequals(t, "untitled");
}

bool has_markup(const std::string& text) {
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] == '<') {
            unsigned char next = static_cast<unsigned char>(text[i + 1]);
            if ((next >= 'a' && next <= 'z') || (next >= 'A' && next <= 'Z'))
                return true;
        }
    }
    return false;
}

void check_title(const std::optional<std::string>& title, const std::string& record_id,
                 const QualityThresholds& thresholds, std::vector<QualityFlag>& out) {
    if (!title)
        return;
    std::size_t length = utf8_length(*title);
    if (length > thresholds.title_max)
        out.push_back({record_id, "overlong_title", "title length " + std::to_string(length)});
    if (is_placeholder_title(*title))
        out.push_back({record_id, "placeholder_title", "title is \"" + trim(*title) + "\""});
}

}  // namespace

std::vector<QualityFlag> quality_flags(const std::vector<ParsedFeed>& corpus,
                                       const QualityThresholds& thresholds) {
    std::vector<QualityFlag> out;
    for (const ParsedFeed& pf : corpus) {
        const FeedRecord& f = pf.feed;
        std::string feed_id = container_record_id(f.rss_url);
        if (f.subtitle) {
            std::size_t length = utf8_length(*f.subtitle);
            if (length > thresholds.subtitle_max)
                out.push_back(
                    {feed_id, "overlong_subtitle", "subtitle length " + std::to_string(length)});
        }
        check_title(f.title, feed_id, thresholds, out);
        if (filled(f.last_updated_raw) && !f.last_updated)
            out.push_back({feed_id, "unparseable_date", "last updated: " + *f.last_updated_raw});

        for (const EntryRecord& e : pf.entries) {
            std::string entry_id = item_record_id(e, feed_id);
            check_title(e.title, entry_id, thresholds, out);
            if (e.content && has_markup(*e.content))
                out.push_back({entry_id, "markup_in_content", "content contains markup"});
            if (filled(e.publication_date_raw) && !e.publication_date)
                out.push_back(
                    {entry_id, "unparseable_date", "publication date: " + *e.publication_date_raw});
        }
    }
    return out;
}

std::string quality_flags_to_json(const std::vector<QualityFlag>& flags) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const QualityFlag& f : flags) {
        nlohmann::ordered_json item;
        item["record_id"] = f.record_id;
        item["flag"] = f.flag;
        item["detail"] = f.detail;
        arr.push_back(std::move(item));
    }
    return arr.dump(2) + "\n";
}

std::chrono::year_month_day bucket_of(UtcSeconds t) {
    using namespace std::chrono;
    year_month_day ymd{floor<days>(t)};
    unsigned m = static_cast<unsigned>(ymd.month());
    unsigned anchor = ((m - 1) / 2) * 2 + 1;  // 1,3,5,7,9,11
    return ymd.year() / month{anchor} / day{1};
}

TimelineReport tags_over_time(const std::vector<NormalizedRecord>& records,
                              const std::vector<std::string>& keys) {
    using namespace std::chrono;
    TimelineReport report;

    std::vector<const NormalizedRecord*> dated;
    for (const NormalizedRecord& rec : records) {
        if (rec.kind != "item")
            continue;
        if (rec.publication_date) {
            ++report.dated;
            dated.push_back(&rec);
        } else {
            ++report.dateless;
        }
    }
    if (dated.empty())
        return report;

    sys_days span_min = sys_days::max();
    sys_days span_max = sys_days::min();
    for (const NormalizedRecord* rec : dated) {
        sys_days b{bucket_of(*rec->publication_date)};
        span_min = std::min(span_min, b);
        span_max = std::max(span_max, b);
    }

    bool tag_mode = keys.empty();
    std::vector<std::string> selected;
    if (tag_mode) {
        std::set<std::string> distinct;
        for (const NormalizedRecord* rec : dated)
            for (const std::string& tag : rec->keywords)
                distinct.insert(tag);
        selected.assign(distinct.begin(), distinct.end());
    } else {
        std::set<std::string> seen;
        for (const std::string& key : keys)
            if (seen.insert(key).second)
                selected.push_back(key);
    }

    auto matches = [&](const NormalizedRecord& rec, const std::string& key) {
        if (tag_mode)
            return std::find(rec.keywords.begin(), rec.keywords.end(), key) != rec.keywords.end();
        return icontains(rec.title, key) ||
               (rec.abstract && icontains(*rec.abstract, key));
    };

    std::map<std::string, std::map<sys_days, std::size_t>> counts;
    for (const NormalizedRecord* rec : dated) {
        sys_days b{bucket_of(*rec->publication_date)};
        for (const std::string& key : selected)
            if (matches(*rec, key))
                ++counts[key][b];
    }

    for (const std::string& key : selected) {
        year_month_day start{span_min};
        year_month ym = start.year() / start.month();
        year_month_day end{span_max};
        year_month ym_end = end.year() / end.month();
        for (; ym <= ym_end; ym += months{2}) {
            sys_days bucket{ym.year() / ym.month() / day{1}};
            std::size_t count = 0;
            auto kit = counts.find(key);
            if (kit != counts.end()) {
                auto bit = kit->second.find(bucket);
                if (bit != kit->second.end())
                    count = bit->second;
            }
            report.rows.push_back({key, year_month_day{bucket}, count});
        }
    }
    return report;
}

std::string timeline_to_csv(const TimelineReport& report) {
    std::string out = "key,bucket_start,count\n";
    for (const TimeBucketRow& row : report.rows) {
        out += csv_field(row.key);
        out.push_back(',');
        out += format_date(row.bucket_start);
        out.push_back(',');
        out += std::to_string(row.count);
        out.push_back('\n');
    }
    return out;
}

}  // namespace feedpipe
