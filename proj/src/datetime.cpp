#include "datetime.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "strings.hpp"

namespace feedpipe {

namespace {

using std::chrono::day;
using std::chrono::hours;
using std::chrono::minutes;
using std::chrono::month;
using std::chrono::seconds;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

struct Cursor {
    std::string_view s;
    size_t pos = 0;

    bool done() const { return pos >= s.size(); }
    char peek() const { return done() ? '\0' : s[pos]; }
    void skip_ws() {
        while (!done() && (s[pos] == ' ' || s[pos] == '\t'))
            ++pos;
    }
    bool literal(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::optional<int> number(size_t min_digits, size_t max_digits) {
        size_t start = pos;
        int v = 0;
        while (pos < s.size() && pos - start < max_digits && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + (s[pos] - '0');
            ++pos;
        }
        if (pos - start < min_digits) {
            pos = start;
            return std::nullopt;
        }
        return v;
    }
    std::string word() {
        size_t start = pos;
        while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos])))
            ++pos;
        return std::string(s.substr(start, pos - start));
    }
};

std::optional<int> month_from_name(std::string_view name) {
    static constexpr std::array<std::string_view, 12> kMonths = {
        "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};
    if (name.size() < 3)
        return std::nullopt;
    std::string low = to_lower(name.substr(0, 3));
    for (int i = 0; i < 12; ++i)
        if (low == kMonths[i])
            return i + 1;
    return std::nullopt;
}

// offset minutes east of UTC, or nullopt when the tail is not a zone
std::optional<int> parse_zone(Cursor& c) {
    c.skip_ws();
    if (c.done())
        return 0;  // zoneless -> UTC
    char ch = c.peek();
    if (ch == 'Z' || ch == 'z') {
        ++c.pos;
        return 0;
    }
    if (ch == '+' || ch == '-') {
        int sign = (ch == '+') ? 1 : -1;
        ++c.pos;
        auto hh = c.number(1, 2);
        if (!hh)
            return std::nullopt;
        int mm = 0;
        if (c.literal(':')) {
            auto m2 = c.number(2, 2);
            if (!m2)
                return std::nullopt;
            mm = *m2;
        } else {
            // +0000 style: two more digits if present
            auto m2 = c.number(0, 2);
            mm = m2.value_or(0);
        }
        if (*hh > 14 || mm > 59)
            return std::nullopt;
        return sign * (*hh * 60 + mm);
    }
    std::string name = to_lower(c.word());
    if (name.empty())
        return std::nullopt;
    static const std::array<std::pair<std::string_view, int>, 12> kZones = {{
        {"ut", 0}, {"utc", 0}, {"gmt", 0}, {"z", 0},
        {"est", -5 * 60}, {"edt", -4 * 60}, {"cst", -6 * 60}, {"cdt", -5 * 60},
        {"mst", -7 * 60}, {"mdt", -6 * 60}, {"pst", -8 * 60}, {"pdt", -7 * 60},
    }};
    for (const auto& [zn, off] : kZones)
        if (name == zn)
            return off;
    return std::nullopt;
}

std::optional<UtcSeconds> assemble(int y, int mo, int d, int h, int mi, int se, int zone_minutes) {
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60)
        return std::nullopt;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        return std::nullopt;
    if (se == 60)
        se = 59;  // leap second clamp
    auto t = sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
    return UtcSeconds{t - minutes{zone_minutes}};
}

// "Wed, 17 Aug 2016 03:54:00 +0000", weekday optional, 2- or 4-digit year
std::optional<UtcSeconds> parse_rfc822(std::string_view text) {
    Cursor c{text};
    c.skip_ws();
    if (std::isalpha(static_cast<unsigned char>(c.peek()))) {
        c.word();
        c.skip_ws();
        if (!c.literal(','))
            return std::nullopt;
    }
    c.skip_ws();
    auto d = c.number(1, 2);
    if (!d)
        return std::nullopt;
    c.skip_ws();
    auto mo = month_from_name(c.word());
    if (!mo)
        return std::nullopt;
    c.skip_ws();
    auto y = c.number(2, 4);
    if (!y)
        return std::nullopt;
    int yy = *y;
    if (yy < 100)
        yy += (yy < 70) ? 2000 : 1900;
    c.skip_ws();
    auto h = c.number(1, 2);
    if (!h || !c.literal(':'))
        return std::nullopt;
    auto mi = c.number(2, 2);
    if (!mi)
        return std::nullopt;
    int se = 0;
    if (c.literal(':')) {
        auto s2 = c.number(2, 2);
        if (!s2)
            return std::nullopt;
        se = *s2;
    }
    auto zone = parse_zone(c);
    if (!zone)
        return std::nullopt;
    c.skip_ws();
    if (!c.done())
        return std::nullopt;
    return assemble(yy, *mo, *d, *h, *mi, se, *zone);
}

// "2022-11-16 09:57:58", "2022-11-16T09:57:58.123+01:00", date-only
std::optional<UtcSeconds> parse_iso8601(std::string_view text) {
    Cursor c{text};
    c.skip_ws();
    auto y = c.number(4, 4);
    if (!y || !c.literal('-'))
        return std::nullopt;
    auto mo = c.number(2, 2);
    if (!mo || !c.literal('-'))
        return std::nullopt;
    auto d = c.number(2, 2);
    if (!d)
        return std::nullopt;
    int h = 0, mi = 0, se = 0, zone = 0;
    c.skip_ws();
    if (!c.done()) {
        if (c.peek() == 'T' || c.peek() == 't')
            ++c.pos;
        c.skip_ws();
        auto h2 = c.number(2, 2);
        if (!h2 || !c.literal(':'))
            return std::nullopt;
        auto mi2 = c.number(2, 2);
        if (!mi2)
            return std::nullopt;
        h = *h2;
        mi = *mi2;
        if (c.literal(':')) {
            auto s2 = c.number(2, 2);
            if (!s2)
                return std::nullopt;
            se = *s2;
            if (c.literal('.')) {
                if (!c.number(1, 9))
                    return std::nullopt;
            }
        }
        auto z = parse_zone(c);
        if (!z)
            return std::nullopt;
        zone = *z;
        c.skip_ws();
        if (!c.done())
            return std::nullopt;
    }
    return assemble(*y, *mo, *d, h, mi, se, zone);
}

}  // namespace

std::optional<UtcSeconds> parse_datetime(std::string_view text) {
    std::string t = trim(text);
    if (t.empty())
        return std::nullopt;
    if (auto iso = parse_iso8601(t))
        return iso;
    return parse_rfc822(t);
}

std::string format_iso8601(UtcSeconds t) {
    auto dp = std::chrono::floor<std::chrono::days>(t);
    std::chrono::year_month_day ymd{dp};
    std::chrono::hh_mm_ss hms{t - dp};
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), long(hms.hours().count()),
                  long(hms.minutes().count()), long(hms.seconds().count()));
    return buf;
}

std::string format_compact(UtcSeconds t) {
    auto dp = std::chrono::floor<std::chrono::days>(t);
    std::chrono::year_month_day ymd{dp};
    std::chrono::hh_mm_ss hms{t - dp};
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d%02u%02uT%02ld%02ld%02ld", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), long(hms.hours().count()),
                  long(hms.minutes().count()), long(hms.seconds().count()));
    return buf;
}

std::string format_date(std::chrono::year_month_day d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                  unsigned(d.day()));
    return buf;
}

UtcSeconds utc_now() {
    return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

}  // namespace feedpipe
