#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "converter.hpp"
#include "feed_parser.hpp"

namespace feedpipe {

enum class InclusionLevel { feed, entry };

/// Per-field inclusion percentages over a parsed corpus. Rates are stored in
/// integer tenths of a percent (667 = 66.7%) to keep rounding exact; field
/// order follows the reported tables ("title, subtitle, blog url, ..." at
/// feed level, "title, id, link, ..." at entry level).
struct InclusionReport {
    InclusionLevel level = InclusionLevel::feed;
    std::size_t denominator = 0;
    std::vector<std::pair<std::string, int>> rate_tenths;  // empty when denominator == 0
    // Date fields that were present but did not parse, counted separately.
    std::vector<std::pair<std::string, std::size_t>> unparseable;
};

/// A field counts as included when present and non-empty after trimming;
/// date fields count on their raw text, parseable or not. Percentages are
/// rounded half-up to one decimal.
InclusionReport inclusion_rates(const std::vector<ParsedFeed>& corpus, InclusionLevel level);

std::string inclusion_report_to_json(const InclusionReport& report);

struct QualityThresholds {
    std::size_t subtitle_max = 300;  // code points
    std::size_t title_max = 200;
};

struct QualityFlag {
    std::string record_id;  // id the record has after conversion
    std::string flag;       // overlong_subtitle | overlong_title | placeholder_title |
                            // markup_in_content | unparseable_date
    std::string detail;
};

std::vector<QualityFlag> quality_flags(const std::vector<ParsedFeed>& corpus,
                                       const QualityThresholds& thresholds = {});

std::string quality_flags_to_json(const std::vector<QualityFlag>& flags);

/// Two-month bucket holding this instant: first day of the odd month (Jan,
/// Mar, May, Jul, Sep, Nov) its calendar month falls into.
std::chrono::year_month_day bucket_of(UtcSeconds t);

struct TimeBucketRow {
    std::string key;
    std::chrono::year_month_day bucket_start;
    std::size_t count = 0;
};

struct TimelineReport {
    std::vector<TimeBucketRow> rows;
    std::size_t dated = 0;     // items carrying a publication date
    std::size_t dateless = 0;  // items excluded for lacking one
};

/// Counts item records per key per two-month bucket. With no keys, every
/// distinct keyword is a key (exact-tag counting); with keys, an item matches
/// a key when it appears case-insensitively in the title or abstract. Buckets
/// with zero count are kept across the corpus date span.
TimelineReport tags_over_time(const std::vector<NormalizedRecord>& records,
                              const std::vector<std::string>& keys);

/// key,bucket_start,count
std::string timeline_to_csv(const TimelineReport& report);

}  // namespace feedpipe
