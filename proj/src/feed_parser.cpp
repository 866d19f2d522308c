#include "feed_parser.hpp"

#include <stdexcept>

#include "json.hpp"

#include "strings.hpp"
#include "xml.hpp"

namespace feedpipe {

namespace {

// iTunes/media/slash extensions reuse local names like author, subtitle and
// comments, so core fields match unprefixed names only; dc:creator and
// content:encoded match by local name because their prefixes are, in
// practice, always dc: and content:.
const XmlNode* first_unprefixed(const XmlNode& parent, std::string_view name) {
    for (const XmlNode& c : parent.children)
        if (iequals(c.name, name))
            return &c;
    return nullptr;
}

std::optional<std::string> text_field(const XmlNode& parent, std::string_view name) {
    const XmlNode* node = first_unprefixed(parent, name);
    if (!node)
        return std::nullopt;
    return trim(node->deep_text());
}

// First link child usable as a page URL: plain-text RSS links win, then Atom
// href links whose rel is absent or "alternate" (rel=self is the feed, not
// the page).
std::optional<std::string> link_field(const XmlNode& parent) {
    for (const XmlNode& c : parent.children) {
        if (!iequals(c.name, "link"))
            continue;
        std::string text = trim(c.text);
        if (!text.empty())
            return text;
    }
    for (const XmlNode& c : parent.children) {
        if (!iequals(xml_local_name(c.name), "link"))
            continue;
        std::string rel = to_lower(trim(c.attr("rel")));
        if (!rel.empty() && rel != "alternate")
            continue;
        std::string href = trim(c.attr("href"));
        if (!href.empty())
            return href;
    }
    return std::nullopt;
}

void set_date(const std::optional<std::string>& raw, std::optional<std::string>& raw_out,
              std::optional<UtcSeconds>& parsed_out) {
    if (!raw)
        return;
    raw_out = *raw;
    parsed_out = parse_datetime(*raw);
}

EntryRecord parse_entry(const XmlNode& node, const std::string& rss_url) {
    EntryRecord e;
    e.parent_rss_url = rss_url;
    e.title = text_field(node, "title");

    e.entry_id = text_field(node, "guid");
    if (!e.entry_id)
        e.entry_id = text_field(node, "id");

    e.link = link_field(node);

    std::optional<std::string> date = text_field(node, "pubdate");
    if (!date)
        date = text_field(node, "published");
    set_date(date, e.publication_date_raw, e.publication_date);

    for (const XmlNode& c : node.children) {
        std::string_view local = xml_local_name(c.name);
        if (iequals(local, "creator")) {
            std::string name = trim(c.deep_text());
            if (!name.empty())
                e.authors.push_back(std::move(name));
        } else if (iequals(c.name, "author")) {
            const XmlNode* name_node = c.first_child("name");
            std::string name = trim(name_node ? name_node->deep_text() : c.deep_text());
            if (!name.empty())
                e.authors.push_back(std::move(name));
        }
    }

    e.summary = text_field(node, "description");
    if (!e.summary)
        e.summary = text_field(node, "summary");

    for (const XmlNode& c : node.children) {
        if (iequals(xml_local_name(c.name), "encoded")) {
            e.content = trim(c.deep_text());
            break;
        }
    }
    if (!e.content)
        e.content = text_field(node, "content");

    for (const XmlNode& c : node.children) {
        if (!iequals(c.name, "category"))
            continue;
        std::string tag = trim(c.attr("term"));
        if (tag.empty())
            tag = trim(c.deep_text());
        if (!tag.empty())
            e.tags.push_back(std::move(tag));
    }

    e.comments_url = text_field(node, "comments");
    return e;
}

void parse_channel_fields(const XmlNode& channel, FeedRecord& feed) {
    feed.title = text_field(channel, "title");
    feed.subtitle = text_field(channel, "description");
    if (!feed.subtitle)
        feed.subtitle = text_field(channel, "subtitle");
    feed.blog_url = link_field(channel);
    set_date(text_field(channel, "lastbuilddate"), feed.last_updated_raw, feed.last_updated);
    feed.language = text_field(channel, "language");
}

void parse_atom_fields(const XmlNode& root, FeedRecord& feed) {
    feed.title = text_field(root, "title");
    feed.subtitle = text_field(root, "subtitle");
    feed.blog_url = link_field(root);
    set_date(text_field(root, "updated"), feed.last_updated_raw, feed.last_updated);
    if (root.has_attr("xml:lang"))
        feed.language = trim(root.attr("xml:lang"));
}

}  // namespace

ParseFeedResult parse_feed_document(const std::string& xml_bytes, const std::string& rss_url) {
    ParseFeedResult result;
    result.parsed.feed.rss_url = rss_url;

    XmlDocument doc;
    try {
        doc = parse_xml(xml_bytes);
    } catch (const XmlParseError& e) {
        result.error = e.what();
        return result;
    }
    result.parsed.encoding_replacements = doc.encoding_replacements;

    std::string_view root_name = xml_local_name(doc.root.name);
    FeedRecord& feed = result.parsed.feed;

    if (iequals(root_name, "rss") || iequals(root_name, "channel")) {
        const XmlNode* channel =
            iequals(root_name, "channel") ? &doc.root : doc.root.first_child("channel");
        if (channel) {
            parse_channel_fields(*channel, feed);
            for (const XmlNode& c : channel->children)
                if (iequals(c.name, "item"))
                    result.parsed.entries.push_back(parse_entry(c, rss_url));
        }
        result.ok = true;
        return result;
    }
    if (iequals(root_name, "feed")) {
        parse_atom_fields(doc.root, feed);
        for (const XmlNode& c : doc.root.children)
            if (iequals(c.name, "entry"))
                result.parsed.entries.push_back(parse_entry(c, rss_url));
        result.ok = true;
        return result;
    }

    result.error = "unsupported root element: " + doc.root.name;
    return result;
}

namespace {

using Json = nlohmann::ordered_json;

Json opt_str(const std::optional<std::string>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json opt_instant(const std::optional<UtcSeconds>& v) {
    return v ? Json(format_iso8601(*v)) : Json(nullptr);
}

std::optional<std::string> str_or_null(const Json& v) {
    if (v.is_string())
        return v.get<std::string>();
    return std::nullopt;
}

std::optional<UtcSeconds> instant_or_null(const Json& v) {
    if (!v.is_string())
        return std::nullopt;
    return parse_datetime(v.get<std::string>());
}

std::vector<std::string> str_list(const Json& v) {
    std::vector<std::string> out;
    if (v.is_array())
        for (const auto& e : v)
            if (e.is_string())
                out.push_back(e.get<std::string>());
    return out;
}

}  // namespace

std::string parsed_corpus_to_json(const std::vector<ParsedFeed>& corpus) {
    Json arr = Json::array();
    for (const ParsedFeed& pf : corpus) {
        Json feed;
        feed["title"] = opt_str(pf.feed.title);
        feed["subtitle"] = opt_str(pf.feed.subtitle);
        feed["blog_url"] = opt_str(pf.feed.blog_url);
        feed["rss_url"] = pf.feed.rss_url;
        feed["last_updated"] = opt_instant(pf.feed.last_updated);
        feed["last_updated_raw"] = opt_str(pf.feed.last_updated_raw);
        feed["language"] = opt_str(pf.feed.language);
        feed["fetched_at"] = pf.feed.fetched_at;

        Json entries = Json::array();
        for (const EntryRecord& e : pf.entries) {
            Json je;
            je["title"] = opt_str(e.title);
            je["entry_id"] = opt_str(e.entry_id);
            je["link"] = opt_str(e.link);
            je["publication_date"] = opt_instant(e.publication_date);
            je["publication_date_raw"] = opt_str(e.publication_date_raw);
            je["authors"] = e.authors;
            je["summary"] = opt_str(e.summary);
            je["content"] = opt_str(e.content);
            je["tags"] = e.tags;
            je["comments_url"] = opt_str(e.comments_url);
            je["parent_rss_url"] = e.parent_rss_url;
            entries.push_back(std::move(je));
        }

        Json item;
        item["feed"] = std::move(feed);
        item["entries"] = std::move(entries);
        item["encoding_replacements"] = pf.encoding_replacements;
        arr.push_back(std::move(item));
    }
    return arr.dump(2) + "\n";
}

std::vector<ParsedFeed> parsed_corpus_from_json(const std::string& json_text) {
    Json doc = Json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        throw std::runtime_error("parsed corpus JSON is not a JSON array");

    std::vector<ParsedFeed> out;
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("feed"))
            throw std::runtime_error("parsed corpus record missing feed object");
        ParsedFeed pf;
        const auto& feed = item["feed"];
        pf.feed.title = str_or_null(feed.value("title", Json(nullptr)));
        pf.feed.subtitle = str_or_null(feed.value("subtitle", Json(nullptr)));
        pf.feed.blog_url = str_or_null(feed.value("blog_url", Json(nullptr)));
        pf.feed.rss_url = feed.value("rss_url", std::string());
        pf.feed.last_updated = instant_or_null(feed.value("last_updated", Json(nullptr)));
        pf.feed.last_updated_raw = str_or_null(feed.value("last_updated_raw", Json(nullptr)));
        pf.feed.language = str_or_null(feed.value("language", Json(nullptr)));
        pf.feed.fetched_at = feed.value("fetched_at", std::string());

        if (item.contains("entries") && item["entries"].is_array()) {
            for (const auto& je : item["entries"]) {
                EntryRecord e;
                e.title = str_or_null(je.value("title", Json(nullptr)));
                e.entry_id = str_or_null(je.value("entry_id", Json(nullptr)));
                e.link = str_or_null(je.value("link", Json(nullptr)));
                e.publication_date = instant_or_null(je.value("publication_date", Json(nullptr)));
                e.publication_date_raw =
                    str_or_null(je.value("publication_date_raw", Json(nullptr)));
                e.authors = str_list(je.value("authors", Json::array()));
                e.summary = str_or_null(je.value("summary", Json(nullptr)));
                e.content = str_or_null(je.value("content", Json(nullptr)));
                e.tags = str_list(je.value("tags", Json::array()));
                e.comments_url = str_or_null(je.value("comments_url", Json(nullptr)));
                e.parent_rss_url = je.value("parent_rss_url", pf.feed.rss_url);
                pf.entries.push_back(std::move(e));
            }
        }
        pf.encoding_replacements = item.value("encoding_replacements", std::size_t{0});
        out.push_back(std::move(pf));
    }
    return out;
}

}  // namespace feedpipe
