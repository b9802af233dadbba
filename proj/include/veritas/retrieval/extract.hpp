#pragma once

// Pure extraction functions over fetched markup. What to look for is
// driven by a versioned selector configuration so that search-page layout
// drift is fixed in data rather than code.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "veritas/retrieval/html.hpp"
#include "veritas/retrieval/url.hpp"

namespace veritas::retrieval {

struct SelectorConfig {
    int version = 1;
    std::vector<html::Selector> quickAnswer;  // tried in order

    html::Selector paaItem;
    html::Selector paaQuestion;
    html::Selector paaAnswer;
    html::Selector paaSource;

    html::Selector serpResult;
    html::Selector serpLink;
    html::Selector serpTitle;

    html::Selector articleHeading;
    html::Selector articleParagraph;
    std::optional<html::Selector> articleExclude;
    std::size_t minParagraphTokens = 5;

    static SelectorConfig fromJson(const nlohmann::json& j) {
        try {
            SelectorConfig c;
            c.version = j.at("version").get<int>();
            if (c.version != 1) throw Error("unsupported selector config version " + std::to_string(c.version));
            for (const auto& s : j.at("quick_answer")) c.quickAnswer.push_back(html::Selector::parse(s.get<std::string>()));
            const auto& paa = j.at("paa");
            c.paaItem = html::Selector::parse(paa.at("item").get<std::string>());
            c.paaQuestion = html::Selector::parse(paa.at("question").get<std::string>());
            c.paaAnswer = html::Selector::parse(paa.at("answer").get<std::string>());
            c.paaSource = html::Selector::parse(paa.value("source", std::string("a[href]")));
            const auto& serp = j.at("serp");
            c.serpResult = html::Selector::parse(serp.at("result").get<std::string>());
            c.serpLink = html::Selector::parse(serp.at("link").get<std::string>());
            c.serpTitle = html::Selector::parse(serp.at("title").get<std::string>());
            const auto& art = j.at("article");
            c.articleHeading = html::Selector::parse(art.at("heading").get<std::string>());
            c.articleParagraph = html::Selector::parse(art.at("paragraph").get<std::string>());
            if (art.contains("exclude") && !art["exclude"].get<std::string>().empty())
                c.articleExclude = html::Selector::parse(art["exclude"].get<std::string>());
            c.minParagraphTokens = art.value("min_paragraph_tokens", std::size_t{5});
            return c;
        } catch (const nlohmann::json::exception& e) {
            throw Error(std::string("malformed selector config: ") + e.what());
        }
    }

    static SelectorConfig load(const std::string& path) {
        try {
            return fromJson(nlohmann::json::parse(text::readFile(path)));
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed selector config " + path + ": " + e.what());
        }
    }
};

inline std::optional<std::string> extractQuickAnswer(std::string_view body, const SelectorConfig& cfg) {
    const auto doc = html::Document::parse(body);
    for (const auto& sel : cfg.quickAnswer) {
        for (const html::Node* n : sel.selectAll(doc.root())) {
            if (html::hasHiddenAncestor(*n)) continue;
            std::string t = html::visibleText(*n);
            if (!t.empty()) return t;
        }
    }
    return std::nullopt;
}

struct PaaEntry {
    std::string question;
    std::string answer;
    std::string sourceUrl;  // empty when the entry carries no link

    bool operator==(const PaaEntry&) const = default;
};

/// People-Also-Asked entries in page order; entries missing a question or an
/// answer are dropped. `pageUrl` resolves relative source links.
inline std::vector<PaaEntry> extractPeopleAlsoAsked(std::string_view body, const SelectorConfig& cfg,
                                                    const std::optional<Url>& pageUrl = std::nullopt) {
    const auto doc = html::Document::parse(body);
    std::vector<PaaEntry> out;
    for (const html::Node* item : cfg.paaItem.selectAll(doc.root())) {
        const html::Node* q = cfg.paaQuestion.selectFirst(*item);
        const html::Node* a = cfg.paaAnswer.selectFirst(*item);
        if (!q || !a) continue;
        PaaEntry e{html::visibleText(*q), html::visibleText(*a), {}};
        if (e.question.empty() || e.answer.empty()) continue;
        if (const html::Node* link = cfg.paaSource.selectFirst(*item)) {
            if (const std::string* href = link->attr("href")) {
                std::optional<Url> u = pageUrl ? resolveHref(*pageUrl, *href) : Url::parse(*href);
                if (u) e.sourceUrl = u->str();
            }
        }
        out.push_back(std::move(e));
    }
    return out;
}

struct ArticleText {
    std::vector<std::string> headings;
    std::vector<std::string> paragraphs;

    bool empty() const { return headings.empty() && paragraphs.empty(); }
};

inline ArticleText extractArticle(std::string_view body, const SelectorConfig& cfg) {
    const auto doc = html::Document::parse(body);
    auto keep = [&](const html::Node& n) {
        if (html::hasHiddenAncestor(n)) return false;
        if (cfg.articleExclude && (cfg.articleExclude->matches(n) || html::hasAncestorMatching(n, *cfg.articleExclude)))
            return false;
        return true;
    };
    ArticleText out;
    for (const html::Node* h : cfg.articleHeading.selectAll(doc.root())) {
        if (!keep(*h)) continue;
        std::string t = html::visibleText(*h);
        if (!t.empty()) out.headings.push_back(std::move(t));
    }
    for (const html::Node* p : cfg.articleParagraph.selectAll(doc.root())) {
        if (!keep(*p)) continue;
        std::string t = html::visibleText(*p);
        if (text::splitWhitespace(t).size() < cfg.minParagraphTokens) continue;
        out.paragraphs.push_back(std::move(t));
    }
    return out;
}

struct SearchHit {
    int rank = 0;
    std::string url;
    std::string title;

    bool operator==(const SearchHit&) const = default;
};

/// Organic result links of a search results page, ranked from 1. Redirect
/// wrappers ("/url?q=...") are unwrapped; links back to the search host and
/// duplicates are skipped.
inline std::vector<SearchHit> parseSerpLinks(std::string_view body, const SelectorConfig& cfg, const Url& serpUrl) {
    const auto doc = html::Document::parse(body);
    std::vector<SearchHit> hits;
    for (const html::Node* result : cfg.serpResult.selectAll(doc.root())) {
        const html::Node* link = cfg.serpLink.selectFirst(*result);
        if (!link) continue;
        const std::string* href = link->attr("href");
        if (!href) continue;
        std::string target = *href;
        if (text::startsWith(target, "/url?")) {
            std::size_t qpos = target.find("?q=");
            if (qpos == std::string::npos) qpos = target.find("&q=");
            if (qpos != std::string::npos) {
                const auto start = qpos + 3;
                const auto end = target.find('&', start);
                target = percentDecode(target.substr(start, end == std::string::npos ? std::string::npos : end - start));
            }
        }
        auto u = resolveHref(serpUrl, target);
        if (!u || u->host == serpUrl.host) continue;
        const std::string url = u->str();
        bool dup = false;
        for (const auto& h : hits) dup = dup || h.url == url;
        if (dup) continue;
        std::string title;
        if (const html::Node* t = cfg.serpTitle.selectFirst(*result)) title = html::visibleText(*t);
        if (title.empty()) title = html::visibleText(*link);
        hits.push_back({static_cast<int>(hits.size()) + 1, url, std::move(title)});
    }
    return hits;
}

}  // namespace veritas::retrieval
