#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace feedpipe {

using UtcSeconds = std::chrono::sys_seconds;

/// Accepts RFC 822/1123 ("Wed, 17 Aug 2016 03:54:00 +0000", weekday optional,
/// named zones like GMT/EST) and ISO 8601 ("2022-11-16 09:57:58",
/// "2022-11-16T09:57:58+01:00", fractional seconds ignored). Text without a
/// zone is taken as UTC. Returns nullopt on anything unparseable.
std::optional<UtcSeconds> parse_datetime(std::string_view text);

/// 2016-08-17T03:54:00Z
std::string format_iso8601(UtcSeconds t);

/// 20160817T035400 — used in snapshot filenames.
std::string format_compact(UtcSeconds t);

/// 2016-08-17
std::string format_date(std::chrono::year_month_day d);

UtcSeconds utc_now();

}  // namespace feedpipe
