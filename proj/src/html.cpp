#include "html.hpp"

#include <array>
#include <cctype>

#include "strings.hpp"

namespace feedpipe {

namespace {

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c));
}

struct NamedEntity {
    std::string_view name;
    std::string_view utf8;
};

// the handful seen in real feed summaries; unknown names pass through
constexpr std::array<NamedEntity, 26> kEntities = {{
    {"amp", "&"},      {"lt", "<"},        {"gt", ">"},       {"quot", "\""},
    {"apos", "'"},     {"nbsp", " "},      {"ndash", "\xE2\x80\x93"},
    {"mdash", "\xE2\x80\x94"},             {"hellip", "\xE2\x80\xA6"},
    {"rsquo", "\xE2\x80\x99"},             {"lsquo", "\xE2\x80\x98"},
    {"rdquo", "\xE2\x80\x9D"},             {"ldquo", "\xE2\x80\x9C"},
    {"copy", "\xC2\xA9"},                  {"reg", "\xC2\xAE"},
    {"trade", "\xE2\x84\xA2"},             {"deg", "\xC2\xB0"},
    {"laquo", "\xC2\xAB"},                 {"raquo", "\xC2\xBB"},
    {"middot", "\xC2\xB7"},                {"bull", "\xE2\x80\xA2"},
    {"sect", "\xC2\xA7"},                  {"para", "\xC2\xB6"},
    {"eacute", "\xC3\xA9"},                {"uuml", "\xC3\xBC"},
    {"auml", "\xC3\xA4"},
}};

// decodes one entity at s[pos] == '&'; returns bytes consumed (0 = no entity)
size_t decode_entity_at(std::string_view s, size_t pos, std::string& out) {
    size_t i = pos + 1;
    if (i >= s.size())
        return 0;
    if (s[i] == '#') {
        ++i;
        bool hex = i < s.size() && (s[i] == 'x' || s[i] == 'X');
        if (hex)
            ++i;
        size_t digits_start = i;
        char32_t cp = 0;
        while (i < s.size()) {
            char c = s[i];
            int v;
            if (c >= '0' && c <= '9')
                v = c - '0';
            else if (hex && c >= 'a' && c <= 'f')
                v = c - 'a' + 10;
            else if (hex && c >= 'A' && c <= 'F')
                v = c - 'A' + 10;
            else
                break;
            cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
            if (cp > 0x110000)
                cp = 0x110000;  // clamp, becomes U+FFFD
            ++i;
        }
        if (i == digits_start || i >= s.size() || s[i] != ';')
            return 0;
        append_utf8(out, cp);
        return i + 1 - pos;
    }
    size_t name_start = i;
    while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i])))
        ++i;
    if (i == name_start || i >= s.size() || s[i] != ';')
        return 0;
    std::string_view name = s.substr(name_start, i - name_start);
    for (const auto& e : kEntities) {
        if (name == e.name) {
            out.append(e.utf8);
            return i + 1 - pos;
        }
    }
    return 0;
}

// true when the '<' at pos opens something tag-shaped
bool is_tag_start(std::string_view s, size_t pos) {
    if (pos + 1 >= s.size())
        return false;
    char c = s[pos + 1];
    return is_name_start(c) || c == '/' || c == '!' || c == '?';
}

// consumes a tag-like construct starting at '<'; returns offset past it
size_t skip_markup(std::string_view s, size_t pos, HtmlTag* tag_out) {
    size_t i = pos + 1;
    char c = s[i];
    if (c == '!') {
        if (s.compare(i, 3, "!--") == 0) {
            size_t close = s.find("-->", i);
            return close == std::string_view::npos ? s.size() : close + 3;
        }
        size_t close = s.find('>', i);
        return close == std::string_view::npos ? s.size() : close + 1;
    }
    if (c == '?') {
        size_t close = s.find('>', i);
        return close == std::string_view::npos ? s.size() : close + 1;
    }
    bool closing = false;
    if (c == '/') {
        closing = true;
        ++i;
    }
    size_t name_start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '-' ||
                            s[i] == ':' || s[i] == '_'))
        ++i;
    std::string name = to_lower(s.substr(name_start, i - name_start));
    std::vector<std::pair<std::string, std::string>> attrs;
    while (i < s.size() && s[i] != '>') {
        if (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '/') {
            ++i;
            continue;
        }
        size_t an_start = i;
        while (i < s.size() && s[i] != '=' && s[i] != '>' && s[i] != '/' &&
               !std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        std::string attr_name = to_lower(s.substr(an_start, i - an_start));
        std::string attr_value;
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        if (i < s.size() && s[i] == '=') {
            ++i;
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
                ++i;
            if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
                char quote = s[i++];
                size_t v_start = i;
                while (i < s.size() && s[i] != quote)
                    ++i;
                attr_value = std::string(s.substr(v_start, i - v_start));
                if (i < s.size())
                    ++i;
            } else {
                size_t v_start = i;
                while (i < s.size() && s[i] != '>' && !std::isspace(static_cast<unsigned char>(s[i])))
                    ++i;
                attr_value = std::string(s.substr(v_start, i - v_start));
            }
        }
        if (!attr_name.empty())
            attrs.emplace_back(attr_name, decode_entities(attr_value));
    }
    size_t end = (i < s.size()) ? i + 1 : s.size();
    if (tag_out) {
        tag_out->name = std::move(name);
        tag_out->attrs = std::move(attrs);
        tag_out->closing = closing;
        tag_out->begin = pos;
        tag_out->end = end;
    }
    return end;
}

// skips past the matching close of a raw-text element (script/style)
size_t skip_raw_text(std::string_view s, size_t from, std::string_view element) {
    std::string close = "</" + std::string(element);
    size_t i = from;
    while (i < s.size()) {
        size_t lt = s.find('<', i);
        if (lt == std::string_view::npos)
            return s.size();
        if (istarts_with(s.substr(lt), close)) {
            size_t gt = s.find('>', lt);
            return gt == std::string_view::npos ? s.size() : gt + 1;
        }
        i = lt + 1;
    }
    return s.size();
}

}  // namespace

std::vector<HtmlTag> scan_tags(std::string_view html) {
    std::vector<HtmlTag> tags;
    size_t i = 0;
    while (i < html.size()) {
        size_t lt = html.find('<', i);
        if (lt == std::string_view::npos)
            break;
        if (!is_tag_start(html, lt)) {
            i = lt + 1;
            continue;
        }
        HtmlTag tag;
        i = skip_markup(html, lt, &tag);
        if (!tag.name.empty()) {
            if (!tag.closing && (tag.name == "script" || tag.name == "style"))
                i = skip_raw_text(html, i, tag.name);
            tags.push_back(std::move(tag));
        }
    }
    return tags;
}

std::optional<std::string> tag_attr(const HtmlTag& tag, std::string_view name) {
    for (const auto& [n, v] : tag.attrs)
        if (n == name)
            return v;
    return std::nullopt;
}

std::vector<HtmlAnchor> scan_anchors(std::string_view html) {
    std::vector<HtmlAnchor> anchors;
    auto tags = scan_tags(html);
    for (size_t t = 0; t < tags.size(); ++t) {
        if (tags[t].closing || tags[t].name != "a")
            continue;
        auto href = tag_attr(tags[t], "href");
        // named anchors and other href-less <a> elements are not links
        if (!href || trim(*href).empty())
            continue;
        // text runs to the matching </a> (or the next <a>)
        size_t text_begin = tags[t].end;
        size_t text_end = html.size();
        for (size_t u = t + 1; u < tags.size(); ++u) {
            if (tags[u].name == "a") {
                text_end = tags[u].begin;
                break;
            }
        }
        std::string text;
        size_t i = text_begin;
        while (i < text_end) {
            size_t lt = html.find('<', i);
            if (lt == std::string_view::npos || lt >= text_end) {
                text.append(html.substr(i, text_end - i));
                break;
            }
            text.append(html.substr(i, lt - i));
            i = is_tag_start(html, lt) ? skip_markup(html, lt, nullptr) : lt + 1;
            if (!is_tag_start(html, lt))
                text.push_back('<');
        }
        anchors.push_back({href.value_or(""), collapse_whitespace(decode_entities(text))});
    }
    return anchors;
}

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '&') {
            size_t consumed = decode_entity_at(text, i, out);
            if (consumed > 0) {
                i += consumed;
                continue;
            }
        }
        out.push_back(text[i]);
        ++i;
    }
    return out;
}

std::string strip_markup(std::string_view text) {
    std::string current(text);
    while (true) {
        // 1. drop tags, comments, pi/doctype and script/style bodies
        std::string stripped;
        stripped.reserve(current.size());
        std::string_view s = current;
        size_t i = 0;
        while (i < s.size()) {
            if (s[i] == '<' && is_tag_start(s, i)) {
                HtmlTag tag;
                i = skip_markup(s, i, &tag);
                if (!tag.closing && (tag.name == "script" || tag.name == "style"))
                    i = skip_raw_text(s, i, tag.name);
                continue;
            }
            stripped.push_back(s[i]);
            ++i;
        }
        // 2. decode entities, 3. normalize whitespace
        std::string next = collapse_whitespace(decode_entities(stripped));
        if (next == current)
            return next;
        current = std::move(next);
    }
}

}  // namespace feedpipe
