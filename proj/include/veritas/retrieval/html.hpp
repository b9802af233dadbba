#pragma once

// Error-tolerant HTML tree builder and a CSS selector subset.
//
// The parser never fails: stray end tags are ignored, unclosed elements are
// closed at end of input, and a handful of implied-end rules (p, li, td/th,
// tr, option) keep common real-world markup shaped sensibly. Selectors
// support type, universal, #id, .class, [attr], [attr=v], [attr^=v],
// [attr$=v], [attr*=v], [attr~=v], descendant and child combinators, and
// comma-separated lists.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "veritas/text.hpp"

namespace veritas::html {

struct Node {
    enum class Kind { Document, Element, Text };

    Kind kind = Kind::Element;
    std::string tag;  // lowercase; empty for text and document nodes
    std::vector<std::pair<std::string, std::string>> attrs;
    std::string text;  // decoded text for Text nodes
    Node* parent = nullptr;
    std::vector<std::unique_ptr<Node>> children;

    bool isElement() const { return kind == Kind::Element; }

    const std::string* attr(std::string_view name) const {
        for (const auto& [k, v] : attrs)
            if (k == name) return &v;
        return nullptr;
    }

    bool hasClass(std::string_view cls) const {
        const std::string* c = attr("class");
        if (!c) return false;
        for (const auto& tok : text::splitWhitespace(*c))
            if (tok == cls) return true;
        return false;
    }
};

namespace detail {

inline bool isVoidTag(std::string_view t) {
    static constexpr std::array<std::string_view, 15> kVoid = {
        "area", "base", "br",   "col",   "embed",  "hr",    "img", "input",
        "link", "meta", "param", "source", "track", "wbr",  "keygen"};
    return std::find(kVoid.begin(), kVoid.end(), t) != kVoid.end();
}

inline bool isRawTextTag(std::string_view t) {
    return t == "script" || t == "style" || t == "textarea" || t == "title" || t == "noscript" ||
           t == "template" || t == "xmp";
}

inline bool closesParagraph(std::string_view t) {
    static constexpr std::array<std::string_view, 26> kBlocks = {
        "address", "article", "aside",  "blockquote", "div",    "dl",     "fieldset",
        "footer",  "form",    "h1",     "h2",         "h3",     "h4",     "h5",
        "h6",      "header",  "hr",     "main",       "nav",    "ol",     "p",
        "pre",     "section", "table",  "ul",         "figure"};
    return std::find(kBlocks.begin(), kBlocks.end(), t) != kBlocks.end();
}

inline bool isBlockForText(std::string_view t) {
    return closesParagraph(t) || t == "br" || t == "li" || t == "tr" || t == "td" || t == "th" ||
           t == "dt" || t == "dd" || t == "body" || t == "html" || t == "caption" ||
           t == "figcaption" || t == "option";
}

struct Entity {
    std::string_view name;
    std::uint32_t cp;
};

inline constexpr std::array<Entity, 32> kEntities = {{
    {"amp", '&'},       {"lt", '<'},        {"gt", '>'},        {"quot", '"'},
    {"apos", '\''},     {"nbsp", 0xA0},     {"ndash", 0x2013},  {"mdash", 0x2014},
    {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},  {"rdquo", 0x201D},
    {"hellip", 0x2026}, {"copy", 0xA9},     {"reg", 0xAE},      {"trade", 0x2122},
    {"eacute", 0xE9},   {"egrave", 0xE8},   {"aacute", 0xE1},   {"oacute", 0xF3},
    {"uuml", 0xFC},     {"ouml", 0xF6},     {"auml", 0xE4},     {"ccedil", 0xE7},
    {"middot", 0xB7},   {"bull", 0x2022},   {"laquo", 0xAB},    {"raquo", 0xBB},
    {"euro", 0x20AC},   {"pound", 0xA3},    {"deg", 0xB0},      {"times", 0xD7},
}};

}  // namespace detail

/// Decodes named (common subset) and numeric character references.
/// Unknown references are left verbatim.
inline std::string decodeEntities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out.push_back(s[i]);
            continue;
        }
        const auto semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back('&');
            continue;
        }
        std::string_view ref = s.substr(i + 1, semi - i - 1);
        bool done = false;
        if (!ref.empty() && ref[0] == '#') {
            std::uint32_t cp = 0;
            bool ok = ref.size() > 1;
            const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
            for (std::size_t k = hex ? 2 : 1; k < ref.size() && ok; ++k) {
                const char c = ref[k];
                int d = -1;
                if (c >= '0' && c <= '9') d = c - '0';
                else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
                if (d < 0) ok = false;
                else cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
                if (cp > 0x10FFFF) ok = false;
            }
            if (ok && ref.size() > (hex ? 2u : 1u)) {
                text::appendUtf8(out, cp);
                done = true;
            }
        } else {
            for (const auto& e : detail::kEntities) {
                if (e.name == ref) {
                    text::appendUtf8(out, e.cp);
                    done = true;
                    break;
                }
            }
        }
        if (done) {
            i = semi;
        } else {
            out.push_back('&');
        }
    }
    return out;
}

class Document {
public:
    Document() : root_(std::make_unique<Node>()) { root_->kind = Node::Kind::Document; }

    const Node& root() const { return *root_; }

    static Document parse(std::string_view src) {
        Document doc;
        Builder b(doc.root_.get());
        b.run(src);
        return doc;
    }

private:
    struct Builder {
        Node* root;
        std::vector<Node*> stack;

        explicit Builder(Node* r) : root(r) { stack.push_back(r); }

        Node* current() { return stack.back(); }

        void addText(std::string_view raw, bool decode) {
            if (raw.empty()) return;
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::Text;
            n->text = decode ? decodeEntities(raw) : std::string(raw);
            n->parent = current();
            current()->children.push_back(std::move(n));
        }

        bool inStack(std::string_view tag) const {
            for (auto it = stack.rbegin(); it != stack.rend(); ++it)
                if ((*it)->tag == tag) return true;
            return false;
        }

        void closeTag(std::string_view tag) {
            for (std::size_t i = stack.size(); i-- > 1;) {
                if (stack[i]->tag == tag) {
                    stack.resize(i);
                    return;
                }
            }
        }

        // Closes `tag` only if it is open above the nearest element in `scopeBreakers`.
        void closeImplied(std::string_view tag, std::initializer_list<std::string_view> scopeBreakers) {
            for (std::size_t i = stack.size(); i-- > 1;) {
                const auto& t = stack[i]->tag;
                if (t == tag) {
                    stack.resize(i);
                    return;
                }
                for (auto sb : scopeBreakers)
                    if (t == sb) return;
            }
        }

        void openElement(std::string tag, std::vector<std::pair<std::string, std::string>> attrs,
                         bool selfClosing) {
            if (detail::closesParagraph(tag) && inStack("p")) closeImplied("p", {"div", "td", "th", "li", "section", "article", "body"});
            if (tag == "li") closeImplied("li", {"ul", "ol"});
            if (tag == "dt" || tag == "dd") {
                closeImplied("dt", {"dl"});
                closeImplied("dd", {"dl"});
            }
            if (tag == "td" || tag == "th") {
                closeImplied("td", {"tr", "table"});
                closeImplied("th", {"tr", "table"});
            }
            if (tag == "tr") closeImplied("tr", {"table", "tbody", "thead", "tfoot"});
            if (tag == "option") closeImplied("option", {"select"});

            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::Element;
            n->tag = std::move(tag);
            n->attrs = std::move(attrs);
            n->parent = current();
            Node* raw = n.get();
            current()->children.push_back(std::move(n));
            if (!selfClosing && !detail::isVoidTag(raw->tag)) stack.push_back(raw);
        }

        static bool isNameChar(char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
        }

        void run(std::string_view s) {
            std::size_t i = 0;
            std::size_t textStart = 0;
            auto flush = [&](std::size_t end) {
                if (end > textStart) addText(s.substr(textStart, end - textStart), true);
            };
            while (i < s.size()) {
                if (s[i] != '<') {
                    ++i;
                    continue;
                }
                // Comment, doctype, CDATA, processing instruction.
                if (s.compare(i, 4, "<!--") == 0) {
                    flush(i);
                    auto end = s.find("-->", i + 4);
                    i = end == std::string_view::npos ? s.size() : end + 3;
                    textStart = i;
                    continue;
                }
                if (i + 1 < s.size() && (s[i + 1] == '!' || s[i + 1] == '?')) {
                    flush(i);
                    auto end = s.find('>', i + 2);
                    i = end == std::string_view::npos ? s.size() : end + 1;
                    textStart = i;
                    continue;
                }
                const bool closing = i + 1 < s.size() && s[i + 1] == '/';
                std::size_t j = i + (closing ? 2 : 1);
                if (j >= s.size() || !std::isalpha(static_cast<unsigned char>(s[j]))) {
                    ++i;  // literal '<'
                    continue;
                }
                flush(i);
                std::size_t nameStart = j;
                while (j < s.size() && isNameChar(s[j])) ++j;
                std::string tag = text::toLowerAscii(s.substr(nameStart, j - nameStart));

                std::vector<std::pair<std::string, std::string>> attrs;
                bool selfClosing = false;
                // Attributes.
                while (j < s.size() && s[j] != '>') {
                    if (text::isSpace(s[j])) {
                        ++j;
                        continue;
                    }
                    if (s[j] == '/') {
                        selfClosing = true;
                        ++j;
                        continue;
                    }
                    selfClosing = false;
                    std::size_t an = j;
                    while (j < s.size() && !text::isSpace(s[j]) && s[j] != '=' && s[j] != '>' &&
                           !(s[j] == '/' && j + 1 < s.size() && s[j + 1] == '>'))
                        ++j;
                    std::string name = text::toLowerAscii(s.substr(an, j - an));
                    while (j < s.size() && text::isSpace(s[j])) ++j;
                    std::string value;
                    if (j < s.size() && s[j] == '=') {
                        ++j;
                        while (j < s.size() && text::isSpace(s[j])) ++j;
                        if (j < s.size() && (s[j] == '"' || s[j] == '\'')) {
                            const char q = s[j];
                            auto end = s.find(q, j + 1);
                            if (end == std::string_view::npos) end = s.size();
                            value = decodeEntities(s.substr(j + 1, end - j - 1));
                            j = std::min(end + 1, s.size());
                        } else {
                            std::size_t vs = j;
                            while (j < s.size() && !text::isSpace(s[j]) && s[j] != '>') ++j;
                            value = decodeEntities(s.substr(vs, j - vs));
                        }
                    }
                    if (!name.empty() && !closing) attrs.emplace_back(std::move(name), std::move(value));
                }
                i = j < s.size() ? j + 1 : s.size();
                textStart = i;

                if (closing) {
                    if (tag == "p" && !inStack("p")) {
                        openElement("p", {}, true);  // stray </p> yields an empty paragraph
                    } else if (tag == "br") {
                        openElement("br", {}, true);
                    } else {
                        closeTag(tag);
                    }
                    continue;
                }
                const bool raw = detail::isRawTextTag(tag);
                openElement(tag, std::move(attrs), selfClosing);
                if (raw && !selfClosing) {
                    // Content runs verbatim to the matching end tag.
                    const std::string endTag = "</" + tag;
                    std::size_t k = i;
                    std::size_t end = s.size();
                    while (k < s.size()) {
                        auto pos = s.find("</", k);
                        if (pos == std::string_view::npos) break;
                        if (text::toLowerAscii(s.substr(pos, endTag.size())) == endTag) {
                            end = pos;
                            break;
                        }
                        k = pos + 2;
                    }
                    addText(s.substr(i, end - i), tag == "title" || tag == "textarea");
                    closeTag(tag);
                    if (end == s.size()) {
                        i = s.size();
                    } else {
                        auto gt = s.find('>', end);
                        i = gt == std::string_view::npos ? s.size() : gt + 1;
                    }
                    textStart = i;
                }
            }
            flush(s.size());
        }
    };

    std::unique_ptr<Node> root_;
};

// ---------------------------------------------------------------------------
// Selectors
// ---------------------------------------------------------------------------

struct AttrTest {
    enum class Op { Exists, Equals, Prefix, Suffix, Contains, Word };
    std::string name;
    Op op = Op::Exists;
    std::string value;
};

struct Compound {
    std::string tag;  // empty or "*" = any
    std::vector<std::string> ids;
    std::vector<std::string> classes;
    std::vector<AttrTest> attrs;
};

struct ComplexSelector {
    std::vector<Compound> compounds;   // left to right
    std::vector<char> combinators;     // between compounds: ' ' or '>'
};

class SelectorError : public Error {
public:
    using Error::Error;
};

class Selector {
public:
    Selector() = default;

    static Selector parse(std::string_view src) {
        Selector sel;
        sel.source_ = std::string(src);
        std::size_t i = 0;
        ComplexSelector cur;
        char pendingComb = 0;
        auto ident = [&](std::size_t& k) {
            std::size_t st = k;
            while (k < src.size() && (std::isalnum(static_cast<unsigned char>(src[k])) || src[k] == '-' ||
                                      src[k] == '_' || src[k] == ':' ))
                ++k;
            return std::string(src.substr(st, k - st));
        };
        auto finish = [&]() {
            if (cur.compounds.empty()) throw SelectorError("empty selector in '" + sel.source_ + "'");
            if (pendingComb == '>') throw SelectorError("dangling combinator in '" + sel.source_ + "'");
            sel.list_.push_back(std::move(cur));
            cur = ComplexSelector{};
            pendingComb = 0;
        };
        while (i < src.size()) {
            char c = src[i];
            if (text::isSpace(c)) {
                if (!cur.compounds.empty() && pendingComb == 0) pendingComb = ' ';
                ++i;
                continue;
            }
            if (c == '>') {
                if (cur.compounds.empty()) throw SelectorError("leading combinator in '" + sel.source_ + "'");
                pendingComb = '>';
                ++i;
                continue;
            }
            if (c == ',') {
                finish();
                ++i;
                continue;
            }
            // Compound.
            Compound comp;
            bool any = false;
            if (c == '*') {
                comp.tag = "*";
                ++i;
                any = true;
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                comp.tag = text::toLowerAscii(ident(i));
                any = true;
            }
            while (i < src.size()) {
                c = src[i];
                if (c == '#') {
                    ++i;
                    comp.ids.push_back(ident(i));
                } else if (c == '.') {
                    ++i;
                    comp.classes.push_back(ident(i));
                } else if (c == '[') {
                    auto close = src.find(']', i);
                    if (close == std::string_view::npos) throw SelectorError("unterminated [ in '" + sel.source_ + "'");
                    std::string_view body = src.substr(i + 1, close - i - 1);
                    AttrTest t;
                    auto eq = body.find('=');
                    if (eq == std::string_view::npos) {
                        t.name = text::toLowerAscii(text::trim(body));
                    } else {
                        std::size_t nameEnd = eq;
                        if (eq > 0 && std::string_view("^$*~").find(body[eq - 1]) != std::string_view::npos) {
                            nameEnd = eq - 1;
                            switch (body[eq - 1]) {
                                case '^': t.op = AttrTest::Op::Prefix; break;
                                case '$': t.op = AttrTest::Op::Suffix; break;
                                case '*': t.op = AttrTest::Op::Contains; break;
                                default: t.op = AttrTest::Op::Word; break;
                            }
                        } else {
                            t.op = AttrTest::Op::Equals;
                        }
                        t.name = text::toLowerAscii(text::trim(body.substr(0, nameEnd)));
                        std::string v = text::trim(body.substr(eq + 1));
                        if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
                            v = v.substr(1, v.size() - 2);
                        t.value = std::move(v);
                    }
                    if (t.name.empty()) throw SelectorError("empty attribute name in '" + sel.source_ + "'");
                    comp.attrs.push_back(std::move(t));
                    i = close + 1;
                } else {
                    break;
                }
                any = true;
            }
            if (!any) throw SelectorError("unexpected '" + std::string(1, src[i]) + "' in '" + sel.source_ + "'");
            if (!cur.compounds.empty()) cur.combinators.push_back(pendingComb ? pendingComb : ' ');
            pendingComb = 0;
            cur.compounds.push_back(std::move(comp));
        }
        finish();
        return sel;
    }

    const std::string& source() const { return source_; }

    bool matches(const Node& n) const {
        if (!n.isElement()) return false;
        for (const auto& cs : list_)
            if (matchComplex(cs, cs.compounds.size() - 1, n)) return true;
        return false;
    }

    /// Matching descendants of `scope` (excluding scope itself) in document order.
    std::vector<const Node*> selectAll(const Node& scope) const {
        std::vector<const Node*> out;
        walk(scope, out);
        return out;
    }

    const Node* selectFirst(const Node& scope) const {
        auto all = selectAll(scope);
        return all.empty() ? nullptr : all.front();
    }

private:
    void walk(const Node& n, std::vector<const Node*>& out) const {
        for (const auto& c : n.children) {
            if (matches(*c)) out.push_back(c.get());
            walk(*c, out);
        }
    }

    static bool matchCompound(const Compound& c, const Node& n) {
        if (!n.isElement()) return false;
        if (!c.tag.empty() && c.tag != "*" && c.tag != n.tag) return false;
        for (const auto& id : c.ids) {
            const std::string* v = n.attr("id");
            if (!v || *v != id) return false;
        }
        for (const auto& cls : c.classes)
            if (!n.hasClass(cls)) return false;
        for (const auto& t : c.attrs) {
            const std::string* v = n.attr(t.name);
            if (!v) return false;
            switch (t.op) {
                case AttrTest::Op::Exists: break;
                case AttrTest::Op::Equals:
                    if (*v != t.value) return false;
                    break;
                case AttrTest::Op::Prefix:
                    if (!text::startsWith(*v, t.value)) return false;
                    break;
                case AttrTest::Op::Suffix:
                    if (v->size() < t.value.size() || v->compare(v->size() - t.value.size(), t.value.size(), t.value) != 0)
                        return false;
                    break;
                case AttrTest::Op::Contains:
                    if (v->find(t.value) == std::string::npos) return false;
                    break;
                case AttrTest::Op::Word: {
                    auto words = text::splitWhitespace(*v);
                    if (std::find(words.begin(), words.end(), t.value) == words.end()) return false;
                    break;
                }
            }
        }
        return true;
    }

    static bool matchComplex(const ComplexSelector& cs, std::size_t idx, const Node& n) {
        if (!matchCompound(cs.compounds[idx], n)) return false;
        if (idx == 0) return true;
        const char comb = cs.combinators[idx - 1];
        const Node* p = n.parent;
        if (comb == '>') return p && p->isElement() && matchComplex(cs, idx - 1, *p);
        for (; p && p->isElement(); p = p->parent)
            if (matchComplex(cs, idx - 1, *p)) return true;
        return false;
    }

    std::string source_;
    std::vector<ComplexSelector> list_;
};

// ---------------------------------------------------------------------------
// Text extraction
// ---------------------------------------------------------------------------

inline bool isHidden(const Node& n) {
    if (!n.isElement()) return false;
    if (n.tag == "script" || n.tag == "style" || n.tag == "noscript" || n.tag == "template" ||
        n.tag == "head" || n.tag == "title")
        return true;
    if (n.attr("hidden")) return true;
    if (const std::string* a = n.attr("aria-hidden"); a && *a == "true") return true;
    if (const std::string* st = n.attr("style")) {
        std::string compact;
        for (char c : *st)
            if (!text::isSpace(c)) compact.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (compact.find("display:none") != std::string::npos || compact.find("visibility:hidden") != std::string::npos)
            return true;
    }
    return false;
}

namespace detail {
inline void collectText(const Node& n, std::string& out) {
    if (n.kind == Node::Kind::Text) {
        out += n.text;
        return;
    }
    if (isHidden(n)) return;
    const bool block = n.isElement() && isBlockForText(n.tag);
    if (block) out.push_back(' ');
    for (const auto& c : n.children) collectText(*c, out);
    if (block) out.push_back(' ');
}
}  // namespace detail

/// Visible text of `n`, whitespace-normalized. Block boundaries become spaces.
inline std::string visibleText(const Node& n) {
    std::string raw;
    detail::collectText(n, raw);
    return text::normalizeWhitespace(raw);
}

inline bool hasAncestorMatching(const Node& n, const Selector& sel) {
    for (const Node* p = n.parent; p && p->isElement(); p = p->parent)
        if (sel.matches(*p)) return true;
    return false;
}

inline bool hasHiddenAncestor(const Node& n) {
    for (const Node* p = &n; p && p->isElement(); p = p->parent)
        if (isHidden(*p)) return true;
    return false;
}

}  // namespace veritas::html
