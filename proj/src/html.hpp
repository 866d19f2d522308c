#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace feedpipe {

struct HtmlTag {
    std::string name;  // lowercased
    std::vector<std::pair<std::string, std::string>> attrs;  // names lowercased, values decoded
    bool closing = false;
    std::size_t begin = 0;  // offset of '<'
    std::size_t end = 0;    // offset just past '>'
};

/// Scans tags out of (possibly malformed) HTML. Comments, doctypes,
/// processing instructions and script/style bodies are skipped. Attribute
/// parsing accepts double-quoted, single-quoted and unquoted values in any
/// order.
std::vector<HtmlTag> scan_tags(std::string_view html);

std::optional<std::string> tag_attr(const HtmlTag& tag, std::string_view name);

struct HtmlAnchor {
    std::string href;
    std::string text;  // visible text between <a> and </a>, tags stripped
};

std::vector<HtmlAnchor> scan_anchors(std::string_view html);

/// Decodes numeric (&#8217; &#x2019;) and common named entities to UTF-8.
/// Unknown names are left verbatim.
std::string decode_entities(std::string_view text);

/// Display-text cleanup: tags removed, entities decoded, whitespace collapsed,
/// ends trimmed. Runs to a fixpoint, so the result never contains tag-like
/// '<x' sequences and feeding the output back in returns it unchanged.
std::string strip_markup(std::string_view text);

}  // namespace feedpipe
