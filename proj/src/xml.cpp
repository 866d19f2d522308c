#include "xml.hpp"

#include <array>
#include <cctype>

#include "strings.hpp"

namespace feedpipe {

namespace {

struct Decoded {
    std::string text;
    std::size_t replacements = 0;
};

// cp1252 0x80-0x9F block; 0 marks unassigned bytes
constexpr std::array<char32_t, 32> kCp1252High = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, 0,      0x017D, 0,      0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

void validate_utf8(std::string_view in, Decoded& out) {
    size_t i = 0;
    while (i < in.size()) {
        unsigned char c = static_cast<unsigned char>(in[i]);
        size_t len;
        char32_t cp;
        if (c < 0x80) {
            out.text.push_back(static_cast<char>(c));
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            append_utf8(out.text, 0xFFFD);
            ++out.replacements;
            ++i;
            continue;
        }
        bool ok = i + len <= in.size();
        for (size_t k = 1; ok && k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(in[i + k]);
            if ((cc & 0xC0) != 0x80)
                ok = false;
            else
                cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            append_utf8(out.text, 0xFFFD);
            ++out.replacements;
            ++i;
        } else {
            out.text.append(in.substr(i, len));
            i += len;
        }
    }
}

void decode_single_byte(std::string_view in, bool cp1252, Decoded& out) {
    for (unsigned char c : in) {
        if (c < 0x80) {
            out.text.push_back(static_cast<char>(c));
        } else if (cp1252 && c < 0xA0) {
            char32_t cp = kCp1252High[c - 0x80];
            if (cp == 0) {
                cp = 0xFFFD;
                ++out.replacements;
            }
            append_utf8(out.text, cp);
        } else {
            append_utf8(out.text, c);
        }
    }
}

void decode_utf16(std::string_view in, bool big_endian, Decoded& out) {
    size_t n = in.size() / 2;
    auto unit = [&](size_t k) -> char32_t {
        unsigned char a = static_cast<unsigned char>(in[2 * k]);
        unsigned char b = static_cast<unsigned char>(in[2 * k + 1]);
        return big_endian ? (char32_t(a) << 8 | b) : (char32_t(b) << 8 | a);
    };
    for (size_t k = 0; k < n; ++k) {
        char32_t u = unit(k);
        if (u >= 0xD800 && u <= 0xDBFF && k + 1 < n) {
            char32_t lo = unit(k + 1);
            if (lo >= 0xDC00 && lo <= 0xDFFF) {
                append_utf8(out.text, 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00));
                ++k;
                continue;
            }
        }
        if (u >= 0xD800 && u <= 0xDFFF) {
            append_utf8(out.text, 0xFFFD);
            ++out.replacements;
        } else {
            append_utf8(out.text, u);
        }
    }
    if (in.size() % 2) {
        append_utf8(out.text, 0xFFFD);
        ++out.replacements;
    }
}

std::string sniff_declared_encoding(std::string_view bytes) {
    std::string_view head = bytes.substr(0, std::min<size_t>(bytes.size(), 256));
    size_t enc = head.find("encoding");
    if (enc == std::string_view::npos)
        return "";
    size_t q = head.find_first_of("\"'", enc);
    if (q == std::string_view::npos)
        return "";
    char quote = head[q];
    size_t end = head.find(quote, q + 1);
    if (end == std::string_view::npos)
        return "";
    return to_lower(head.substr(q + 1, end - q - 1));
}

Decoded decode_document_bytes(std::string_view bytes) {
    Decoded out;
    if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") {
        validate_utf8(bytes.substr(3), out);
        return out;
    }
    if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0xFF &&
        static_cast<unsigned char>(bytes[1]) == 0xFE) {
        decode_utf16(bytes.substr(2), false, out);
        return out;
    }
    if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0xFE &&
        static_cast<unsigned char>(bytes[1]) == 0xFF) {
        decode_utf16(bytes.substr(2), true, out);
        return out;
    }
    std::string enc = sniff_declared_encoding(bytes);
    if (enc == "iso-8859-1" || enc == "latin1" || enc == "latin-1" || enc == "iso8859-1") {
        decode_single_byte(bytes, false, out);
    } else if (enc == "windows-1252" || enc == "cp1252") {
        decode_single_byte(bytes, true, out);
    } else {
        validate_utf8(bytes, out);
    }
    return out;
}

constexpr std::array<std::pair<std::string_view, std::string_view>, 5> kXmlEntities = {{
    {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""}, {"apos", "'"},
}};

// decodes XML entities; unknown names stay verbatim
std::string decode_xml_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        size_t semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(s[i++]);
            continue;
        }
        std::string_view body = s.substr(i + 1, semi - i - 1);
        if (!body.empty() && body[0] == '#') {
            bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
            std::string_view digits = body.substr(hex ? 2 : 1);
            char32_t cp = 0;
            bool ok = !digits.empty();
            for (char c : digits) {
                int v;
                if (c >= '0' && c <= '9')
                    v = c - '0';
                else if (hex && c >= 'a' && c <= 'f')
                    v = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F')
                    v = c - 'A' + 10;
                else {
                    ok = false;
                    break;
                }
                cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
                if (cp > 0x110000)
                    cp = 0x110000;
            }
            if (ok) {
                append_utf8(out, cp);
                i = semi + 1;
                continue;
            }
        } else {
            bool matched = false;
            for (const auto& [name, repl] : kXmlEntities) {
                if (body == name) {
                    out.append(repl);
                    matched = true;
                    break;
                }
            }
            if (matched) {
                i = semi + 1;
                continue;
            }
        }
        out.push_back(s[i++]);
    }
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    XmlNode parse_document() {
        skip_prolog();
        if (pos_ >= s_.size())
            throw XmlParseError("no root element", pos_);
        XmlNode root = parse_element();
        // tolerate trailing whitespace/comments/PIs after the root
        skip_prolog();
        return root;
    }

private:
    std::string_view s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what, size_t at) { throw XmlParseError(what, at); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    // whitespace, comments, PIs, DOCTYPE; errors on stray text
    void skip_prolog() {
        while (true) {
            skip_ws();
            if (pos_ >= s_.size())
                return;
            if (s_[pos_] != '<')
                fail("text outside of root element", pos_);
            if (s_.compare(pos_, 4, "<!--") == 0) {
                size_t close = s_.find("-->", pos_ + 4);
                if (close == std::string_view::npos)
                    fail("unterminated comment", pos_);
                pos_ = close + 3;
            } else if (s_.compare(pos_, 2, "<?") == 0) {
                size_t close = s_.find("?>", pos_ + 2);
                if (close == std::string_view::npos)
                    fail("unterminated processing instruction", pos_);
                pos_ = close + 2;
            } else if (s_.compare(pos_, 2, "<!") == 0) {
                skip_doctype();
            } else {
                return;  // element start (or malformed, caught later)
            }
        }
    }

    void skip_doctype() {
        size_t start = pos_;
        pos_ += 2;
        int bracket_depth = 0;
        while (pos_ < s_.size()) {
            char c = s_[pos_++];
            if (c == '[')
                ++bracket_depth;
            else if (c == ']')
                --bracket_depth;
            else if (c == '>' && bracket_depth <= 0)
                return;
        }
        fail("unterminated DOCTYPE", start);
    }

    std::string read_name() {
        size_t start = pos_;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == ':' || c == '_' || c == '-' ||
                c == '.')
                ++pos_;
            else
                break;
        }
        if (pos_ == start)
            fail("expected a name", start);
        return std::string(s_.substr(start, pos_ - start));
    }

    XmlNode parse_element() {
        size_t start = pos_;
        if (s_[pos_] != '<')
            fail("expected element", pos_);
        ++pos_;
        XmlNode node;
        node.name = read_name();
        // attributes
        while (true) {
            skip_ws();
            if (pos_ >= s_.size())
                fail("unterminated start tag for <" + node.name + ">", start);
            if (s_[pos_] == '>') {
                ++pos_;
                break;
            }
            if (s_.compare(pos_, 2, "/>") == 0) {
                pos_ += 2;
                return node;  // empty element
            }
            XmlAttr attr;
            attr.name = read_name();
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '=') {
                ++pos_;
                skip_ws();
                if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\''))
                    fail("attribute value must be quoted", pos_);
                char quote = s_[pos_++];
                size_t v_start = pos_;
                size_t v_end = s_.find(quote, v_start);
                if (v_end == std::string_view::npos)
                    fail("unterminated attribute value", v_start);
                attr.value = decode_xml_text(s_.substr(v_start, v_end - v_start));
                pos_ = v_end + 1;
            }
            node.attrs.push_back(std::move(attr));
        }
        // content
        while (true) {
            if (pos_ >= s_.size())
                fail("missing closing tag for <" + node.name + ">", start);
            if (s_[pos_] == '<') {
                if (s_.compare(pos_, 9, "<![CDATA[") == 0) {
                    size_t close = s_.find("]]>", pos_ + 9);
                    if (close == std::string_view::npos)
                        fail("unterminated CDATA section", pos_);
                    node.text.append(s_.substr(pos_ + 9, close - pos_ - 9));
                    pos_ = close + 3;
                    continue;
                }
                if (s_.compare(pos_, 4, "<!--") == 0) {
                    size_t close = s_.find("-->", pos_ + 4);
                    if (close == std::string_view::npos)
                        fail("unterminated comment", pos_);
                    pos_ = close + 3;
                    continue;
                }
                if (s_.compare(pos_, 2, "<?") == 0) {
                    size_t close = s_.find("?>", pos_ + 2);
                    if (close == std::string_view::npos)
                        fail("unterminated processing instruction", pos_);
                    pos_ = close + 2;
                    continue;
                }
                if (s_.compare(pos_, 2, "</") == 0) {
                    size_t close_at = pos_;
                    pos_ += 2;
                    std::string close_name = read_name();
                    skip_ws();
                    if (pos_ >= s_.size() || s_[pos_] != '>')
                        fail("malformed closing tag", close_at);
                    ++pos_;
                    if (close_name != node.name)
                        fail("closing tag </" + close_name + "> does not match <" + node.name + ">",
                             close_at);
                    return node;
                }
                node.children.push_back(parse_element());
                continue;
            }
            size_t text_start = pos_;
            size_t lt = s_.find('<', pos_);
            if (lt == std::string_view::npos)
                fail("missing closing tag for <" + node.name + ">", start);
            node.text.append(decode_xml_text(s_.substr(text_start, lt - text_start)));
            pos_ = lt;
        }
    }
};

}  // namespace

const XmlNode* XmlNode::first_child(std::string_view qname_ci) const {
    for (const auto& c : children)
        if (iequals(c.name, qname_ci))
            return &c;
    return nullptr;
}

std::string XmlNode::attr(std::string_view name_ci) const {
    for (const auto& a : attrs)
        if (iequals(a.name, name_ci))
            return a.value;
    return "";
}

bool XmlNode::has_attr(std::string_view name_ci) const {
    for (const auto& a : attrs)
        if (iequals(a.name, name_ci))
            return true;
    return false;
}

std::string XmlNode::deep_text() const {
    std::string out = text;
    for (const auto& c : children) {
        std::string inner = c.deep_text();
        if (!inner.empty()) {
            if (!out.empty())
                out.push_back(' ');
            out.append(inner);
        }
    }
    return out;
}

XmlDocument parse_xml(std::string_view bytes) {
    Decoded decoded = decode_document_bytes(bytes);
    Parser parser(decoded.text);
    XmlDocument doc;
    doc.root = parser.parse_document();
    doc.encoding_replacements = decoded.replacements;
    return doc;
}

std::string_view xml_local_name(std::string_view qname) {
    size_t colon = qname.rfind(':');
    return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
}

}  // namespace feedpipe
