#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "veritas/text.hpp"

namespace veritas::retrieval {

/// Absolute http(s) URL split into the parts the fetchers need.
struct Url {
    std::string scheme;  // "http" or "https"
    std::string host;    // lowercase
    int port = 0;        // explicit or scheme default
    std::string target;  // path plus query, always starting with '/'

    std::string path() const {
        auto q = target.find_first_of("?#");
        return q == std::string::npos ? target : target.substr(0, q);
    }

    /// host[:port] with the port omitted when it is the scheme default.
    std::string authority() const {
        const int def = scheme == "https" ? 443 : 80;
        return port == def ? host : host + ":" + std::to_string(port);
    }

    std::string origin() const { return scheme + "://" + authority(); }
    std::string str() const { return origin() + target; }

    static std::optional<Url> parse(std::string_view raw) {
        std::string s = text::trim(raw);
        Url u;
        const auto sep = s.find("://");
        if (sep == std::string::npos) return std::nullopt;
        u.scheme = text::toLowerAscii(s.substr(0, sep));
        if (u.scheme != "http" && u.scheme != "https") return std::nullopt;
        std::string rest = s.substr(sep + 3);
        const auto slash = rest.find_first_of("/?#");
        std::string auth = rest.substr(0, slash);
        u.target = slash == std::string::npos ? "/" : rest.substr(slash);
        if (!u.target.empty() && u.target[0] != '/') u.target = "/" + u.target;
        if (auto frag = u.target.find('#'); frag != std::string::npos) u.target.resize(frag);
        if (u.target.empty()) u.target = "/";
        if (auto at = auth.rfind('@'); at != std::string::npos) auth = auth.substr(at + 1);
        u.port = u.scheme == "https" ? 443 : 80;
        if (auto colon = auth.rfind(':'); colon != std::string::npos && auth.find(']') == std::string::npos) {
            const std::string p = auth.substr(colon + 1);
            auth.resize(colon);
            if (!p.empty()) {
                try {
                    u.port = std::stoi(p);
                } catch (...) {
                    return std::nullopt;
                }
                if (u.port <= 0 || u.port > 65535) return std::nullopt;
            }
        }
        u.host = text::toLowerAscii(auth);
        if (u.host.empty()) return std::nullopt;
        return u;
    }
};

inline std::string percentEncode(std::string_view s) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else if (c == ' ') {
            out.push_back('+');
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

inline std::string percentDecode(std::string_view s) {
    std::string out;
    auto val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '+') {
            out.push_back(' ');
        } else if (s[i] == '%' && i + 2 < s.size() && val(s[i + 1]) >= 0 && val(s[i + 2]) >= 0) {
            out.push_back(static_cast<char>(val(s[i + 1]) * 16 + val(s[i + 2])));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

/// Resolves `href` against `base`. Handles absolute, scheme-relative,
/// root-relative and path-relative references; returns nullopt for
/// non-http(s) targets (mailto:, javascript:, fragments).
inline std::optional<Url> resolveHref(const Url& base, std::string_view href) {
    std::string h = text::trim(href);
    if (h.empty() || h[0] == '#') return std::nullopt;
    if (auto p = h.find("://"); p != std::string::npos && p < h.find_first_of("/?#")) return Url::parse(h);
    if (text::startsWith(h, "//")) return Url::parse(base.scheme + ":" + h);
    if (h.find(':') != std::string::npos && h.find(':') < h.find_first_of("/?")) return std::nullopt;
    if (h[0] == '/') return Url::parse(base.origin() + h);
    std::string dir = base.path();
    dir.resize(dir.rfind('/') + 1);
    return Url::parse(base.origin() + dir + h);
}

}  // namespace veritas::retrieval
