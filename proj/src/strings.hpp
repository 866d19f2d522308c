#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace feedpipe {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

bool iequals(std::string_view a, std::string_view b);
bool icontains(std::string_view haystack, std::string_view needle);
bool istarts_with(std::string_view s, std::string_view prefix);
bool iends_with(std::string_view s, std::string_view suffix);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Runs of ASCII whitespace become a single space; ends trimmed.
std::string collapse_whitespace(std::string_view s);

/// Code point count; each malformed byte counts as one.
std::size_t utf8_length(std::string_view s);

/// Appends the UTF-8 encoding of a code point; invalid values become U+FFFD.
void append_utf8(std::string& out, char32_t cp);

}  // namespace feedpipe
