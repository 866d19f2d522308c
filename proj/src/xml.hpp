#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace feedpipe {

/// Structural failure (mismatched tags, truncated document, garbage before
/// the root). `offset` is a byte offset into the decoded document text.
struct XmlParseError : std::runtime_error {
    std::size_t offset;
    XmlParseError(const std::string& what, std::size_t offset_)
        : std::runtime_error(what + " at byte " + std::to_string(offset_)), offset(offset_) {}
};

struct XmlAttr {
    std::string name;  // as written, prefix included
    std::string value;
};

struct XmlNode {
    std::string name;  // qualified name as written
    std::vector<XmlAttr> attrs;
    std::string text;  // direct character data and CDATA, in document order
    std::vector<XmlNode> children;

    const XmlNode* first_child(std::string_view qname_ci) const;
    std::string attr(std::string_view name_ci) const;  // "" when absent
    bool has_attr(std::string_view name_ci) const;

    /// Text of this node and all descendants, space-joined.
    std::string deep_text() const;
};

struct XmlDocument {
    XmlNode root;
    std::size_t encoding_replacements = 0;  // bytes replaced with U+FFFD
};

/// Parses one XML document. Handles UTF-8 (default), UTF-16 with BOM, and
/// latin-1/windows-1252 via the declaration; undecodable bytes become U+FFFD
/// and are counted. Built-in entities and numeric references are decoded in
/// text and attributes; unknown named entities are kept verbatim. Comments,
/// processing instructions and DOCTYPE are skipped. Throws XmlParseError on
/// structural problems.
XmlDocument parse_xml(std::string_view bytes);

/// Local part of a qualified name ("content:encoded" -> "encoded").
std::string_view xml_local_name(std::string_view qname);

}  // namespace feedpipe
