#include "url.hpp"

#include <cctype>

#include "strings.hpp"

namespace feedpipe {

namespace {

bool valid_host_chars(std::string_view h) {
    if (h.empty())
        return false;
    for (char c : h) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_';
        if (!ok)
            return false;
    }
    return true;
}

std::string remove_dot_segments(std::string_view path) {
    std::vector<std::string> out;
    bool trailing_slash = !path.empty() && path.back() == '/';
    size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/')
            ++i;
        size_t start = i;
        while (i < path.size() && path[i] != '/')
            ++i;
        std::string_view seg = path.substr(start, i - start);
        if (seg.empty() || seg == ".")
            continue;
        if (seg == "..") {
            if (!out.empty())
                out.pop_back();
            continue;
        }
        out.emplace_back(seg);
    }
    std::string result;
    for (const auto& seg : out) {
        result.push_back('/');
        result.append(seg);
    }
    if (result.empty())
        result = "/";
    else if (trailing_slash)
        result.push_back('/');
    return result;
}

}  // namespace

Url parse_url(std::string_view s) {
    Url u;
    std::string_view in = s;
    // scheme
    size_t colon = in.find("://");
    if (colon == std::string_view::npos || colon == 0)
        return u;
    for (size_t i = 0; i < colon; ++i)
        if (!std::isalnum(static_cast<unsigned char>(in[i])) && in[i] != '+' && in[i] != '-' && in[i] != '.')
            return u;
    u.scheme = to_lower(in.substr(0, colon));
    in.remove_prefix(colon + 3);

    // authority ends at '/', '?' or '#'
    size_t auth_end = in.find_first_of("/?#");
    std::string_view authority = (auth_end == std::string_view::npos) ? in : in.substr(0, auth_end);
    std::string_view rest = (auth_end == std::string_view::npos) ? std::string_view{} : in.substr(auth_end);

    size_t at = authority.rfind('@');
    if (at != std::string_view::npos)
        authority.remove_prefix(at + 1);
    size_t port_colon = authority.rfind(':');
    if (port_colon != std::string_view::npos) {
        std::string_view port_sv = authority.substr(port_colon + 1);
        if (port_sv.empty())
            return u;
        int port = 0;
        for (char c : port_sv) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                return u;
            port = port * 10 + (c - '0');
            if (port > 65535)
                return u;
        }
        u.port = port;
        authority = authority.substr(0, port_colon);
    }
    if (!valid_host_chars(authority))
        return u;
    u.host = to_lower(authority);

    size_t frag = rest.find('#');
    if (frag != std::string_view::npos) {
        u.fragment = std::string(rest.substr(frag + 1));
        rest = rest.substr(0, frag);
    }
    size_t q = rest.find('?');
    if (q != std::string_view::npos) {
        u.query = std::string(rest.substr(q + 1));
        rest = rest.substr(0, q);
    }
    u.path = std::string(rest);
    u.valid = true;
    return u;
}

std::string url_to_string(const Url& u) {
    std::string out = u.scheme + "://" + u.host;
    if (u.port >= 0)
        out += ":" + std::to_string(u.port);
    out += u.path;
    if (!u.query.empty())
        out += "?" + u.query;
    if (!u.fragment.empty())
        out += "#" + u.fragment;
    return out;
}

bool is_absolute_url(std::string_view s) {
    return parse_url(s).valid;
}

std::string normalize_url(std::string_view s) {
    Url u = parse_url(trim(s));
    if (!u.valid || (u.scheme != "http" && u.scheme != "https"))
        return "";
    // repeated strip keeps the transform idempotent for hosts like www.www.x.org
    while (u.host.size() > 4 && u.host.rfind("www.", 0) == 0 &&
           u.host.find('.', 4) != std::string::npos)
        u.host.erase(0, 4);
    if ((u.scheme == "http" && u.port == 80) || (u.scheme == "https" && u.port == 443))
        u.port = -1;
    while (!u.path.empty() && u.path.back() == '/')
        u.path.pop_back();
    u.fragment.clear();
    return url_to_string(u);
}

std::string host_of(std::string_view url) {
    std::string norm = normalize_url(url);
    if (norm.empty())
        return "";
    return parse_url(norm).host;
}

std::string resolve_reference(const std::string& base, std::string_view ref) {
    std::string r = trim(ref);
    if (r.empty())
        return base;
    if (is_absolute_url(r))
        return r;
    Url b = parse_url(base);
    if (!b.valid)
        return "";
    std::string origin = b.scheme + "://" + b.host;
    if (b.port >= 0)
        origin += ":" + std::to_string(b.port);

    if (r.size() >= 2 && r[0] == '/' && r[1] == '/')
        return b.scheme + ":" + r;
    if (r[0] == '#') {
        std::string out = origin + (b.path.empty() ? "/" : b.path);
        if (!b.query.empty())
            out += "?" + b.query;
        return out + r;
    }
    if (r[0] == '?')
        return origin + (b.path.empty() ? "/" : b.path) + r;

    std::string path_part = r;
    std::string tail;
    size_t cut = path_part.find_first_of("?#");
    if (cut != std::string::npos) {
        tail = path_part.substr(cut);
        path_part = path_part.substr(0, cut);
    }
    std::string merged;
    if (!path_part.empty() && path_part[0] == '/') {
        merged = path_part;
    } else {
        std::string dir = b.path;
        size_t slash = dir.rfind('/');
        dir = (slash == std::string::npos) ? "/" : dir.substr(0, slash + 1);
        merged = dir + path_part;
    }
    return origin + remove_dot_segments(merged) + tail;
}

std::vector<std::string> path_segments(std::string_view path) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/')
            ++i;
        size_t start = i;
        while (i < path.size() && path[i] != '/')
            ++i;
        if (i > start)
            out.emplace_back(path.substr(start, i - start));
    }
    return out;
}

}  // namespace feedpipe
