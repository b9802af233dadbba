#pragma once

// Search and evidence retrieval. A SearchProvider yields the raw results
// page for a query (live or replayed); the Retriever turns it into ranked
// hits and an EvidenceBundle following the Quick Answer -> People Also
// Asked -> top-K articles fallback chain.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "veritas/core.hpp"
#include "veritas/retrieval/extract.hpp"
#include "veritas/retrieval/fetch.hpp"

namespace veritas::retrieval {

struct SerpPage {
    Url url;
    std::string body;
};

class SearchProvider {
public:
    virtual ~SearchProvider() = default;
    /// Results page for `query`, or nullopt when the provider has none.
    virtual std::optional<SerpPage> fetchSerp(const std::string& query, int k) = 0;
};

/// Expands "{query}" (percent-encoded) and "{num}" in a search URL template.
inline Url expandSearchTemplate(const std::string& tmpl, const std::string& query, int num) {
    std::string s = tmpl;
    auto replace = [&s](const std::string& key, const std::string& value) {
        for (auto pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size()))
            s.replace(pos, key.size(), value);
    };
    replace("{query}", percentEncode(query));
    replace("{num}", std::to_string(num));
    auto u = Url::parse(s);
    if (!u) throw Error("invalid search URL template: " + tmpl);
    return *u;
}

inline constexpr const char* kDefaultSearchTemplate = "https://www.google.com/search?q={query}&num={num}&hl=en";

/// Replays SERPs recorded in a FixtureStore.
class FixtureSearchProvider : public SearchProvider {
public:
    FixtureSearchProvider(std::shared_ptr<const FixtureStore> store, std::string urlTemplate = kDefaultSearchTemplate)
        : store_(std::move(store)), template_(std::move(urlTemplate)) {}

    std::optional<SerpPage> fetchSerp(const std::string& query, int k) override {
        auto body = store_->serp(query);
        if (!body) return std::nullopt;
        return SerpPage{expandSearchTemplate(template_, normalizeQuery(query), std::max(k, 10)), std::move(*body)};
    }

private:
    std::shared_ptr<const FixtureStore> store_;
    std::string template_;
};

/// The results page itself cannot be crawled (robots.txt forbids it).
class SearchBlocked : public Error {
public:
    using Error::Error;
};

/// Fetches SERPs over the network through the polite client, so the search
/// engine's own robots.txt is honoured like any other host's.
class LiveSearchProvider : public SearchProvider {
public:
    LiveSearchProvider(std::shared_ptr<PoliteClient> client, std::string urlTemplate = kDefaultSearchTemplate)
        : client_(std::move(client)), template_(std::move(urlTemplate)) {}

    std::optional<SerpPage> fetchSerp(const std::string& query, int k) override {
        const Url url = expandSearchTemplate(template_, query, std::max(k, 10));
        FetchResult r;
        try {
            r = client_->get(url);
        } catch (const RobotsDisallowed&) {
            throw SearchBlocked("robots.txt of " + url.host + " disallows its results page " + url.path() +
                        "; use --fixtures or configure a search endpoint that permits crawling");
        }
        if (r.status == 404) return std::nullopt;
        if (!r.ok()) throw FetchError("search provider returned status " + std::to_string(r.status));
        return SerpPage{url, std::move(r.body)};
    }

private:
    std::shared_ptr<PoliteClient> client_;
    std::string template_;
};

enum class RetrievalStrategy { QuickAnswerChain, ArticlesOnly };

class NoEvidenceError : public Error {
public:
    NoEvidenceError(std::string query, std::vector<EvidenceStage> attempted)
        : Error(makeMessage(query, attempted)), query_(std::move(query)), attempted_(std::move(attempted)) {}

    const std::string& query() const { return query_; }
    const std::vector<EvidenceStage>& attempted() const { return attempted_; }

private:
    static std::string makeMessage(const std::string& q, const std::vector<EvidenceStage>& stages) {
        std::string m = "no evidence found for '" + q + "' (tried";
        for (auto s : stages) m += " " + std::string(toString(s));
        return m + ")";
    }

    std::string query_;
    std::vector<EvidenceStage> attempted_;
};

struct RetrieverConfig {
    int workers = 4;  // concurrent article fetches (distinct hosts run in parallel)
};

/// Monotonic seconds; injectable so tests can pin timings.
using Clock = std::function<double()>;

inline Clock steadyClock() {
    return [] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
    };
}

class Retriever {
public:
    Retriever(std::shared_ptr<SearchProvider> provider, std::shared_ptr<PoliteClient> client,
              std::shared_ptr<const SelectorConfig> selectors, RetrieverConfig config = {}, Clock clock = steadyClock())
        : provider_(std::move(provider)),
          client_(std::move(client)),
          selectors_(std::move(selectors)),
          config_(config),
          clock_(std::move(clock)) {}

    const SelectorConfig& selectors() const { return *selectors_; }

    /// Top-k hits after dropping robots-disallowed URLs; ranks renumbered from 1.
    std::vector<SearchHit> search(const std::string& query, int k) {
        if (k < 1) throw Error("k must be at least 1");
        auto serp = provider_->fetchSerp(query, k);
        if (!serp) return {};
        return rankAllowed(*serp, k);
    }

    EvidenceBundle retrieveEvidence(const std::string& query, RetrievalStrategy strategy, int k) {
        if (k < 1) throw Error("k must be at least 1");
        const double start = clock_();
        EvidenceBundle bundle;
        bundle.query = query;
        std::vector<EvidenceStage> attempted;

        auto serp = provider_->fetchSerp(query, k);
        auto finish = [&](EvidenceStage stage, std::vector<Passage> passages) {
            bundle.stage = stage;
            bundle.passages = std::move(passages);
            bundle.scrapeSeconds = std::max(0.0, clock_() - start);
            return bundle;
        };

        if (strategy == RetrievalStrategy::QuickAnswerChain) {
            attempted.push_back(EvidenceStage::QuickAnswer);
            if (serp) {
                if (auto qa = extractQuickAnswer(serp->body, *selectors_))
                    return finish(EvidenceStage::QuickAnswer, {{serp->url.str(), *qa}});
            }
            attempted.push_back(EvidenceStage::PeopleAlsoAsked);
            if (serp) {
                std::vector<Passage> passages;
                for (auto& e : extractPeopleAlsoAsked(serp->body, *selectors_, serp->url))
                    passages.push_back({e.sourceUrl.empty() ? serp->url.str() : e.sourceUrl, e.question + " " + e.answer});
                if (!passages.empty()) return finish(EvidenceStage::PeopleAlsoAsked, std::move(passages));
            }
        }
        attempted.push_back(EvidenceStage::Articles);
        if (serp) {
            auto passages = articlePassages(rankAllowed(*serp, k));
            if (!passages.empty()) return finish(EvidenceStage::Articles, std::move(passages));
        }
        throw NoEvidenceError(query, attempted);
    }

    /// Warnings from the most recent calls (skipped pages and why).
    std::vector<std::string> takeWarnings() {
        std::lock_guard lock(warnMu_);
        return std::exchange(warnings_, {});
    }

private:
    void warn(std::string w) {
        std::lock_guard lock(warnMu_);
        warnings_.push_back(std::move(w));
    }

    std::vector<SearchHit> rankAllowed(const SerpPage& serp, int k) {
        std::vector<SearchHit> out;
        for (auto& hit : parseSerpLinks(serp.body, *selectors_, serp.url)) {
            if (static_cast<int>(out.size()) >= k) break;
            auto u = Url::parse(hit.url);
            if (!u) continue;
            if (!client_->allowed(*u)) {
                warn("robots.txt disallows " + hit.url);
                continue;
            }
            hit.rank = static_cast<int>(out.size()) + 1;
            out.push_back(std::move(hit));
        }
        return out;
    }

    std::vector<Passage> articlePassages(const std::vector<SearchHit>& hits) {
        std::vector<std::optional<Passage>> slots(hits.size());
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t i = next++; i < hits.size(); i = next++) {
                try {
                    auto u = Url::parse(hits[i].url);
                    if (!u) continue;
                    FetchResult r = client_->get(*u);
                    if (!r.ok()) {
                        warn("status " + std::to_string(r.status) + " for " + hits[i].url);
                        continue;
                    }
                    ArticleText art = extractArticle(r.body, *selectors_);
                    if (art.empty()) continue;
                    std::vector<std::string> lines = art.headings;
                    lines.insert(lines.end(), art.paragraphs.begin(), art.paragraphs.end());
                    slots[i] = Passage{hits[i].url, text::join(lines, "\n")};
                } catch (const std::exception& e) {
                    warn(std::string("skipped ") + hits[i].url + ": " + e.what());
                }
            }
        };
        const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, config_.workers)), hits.size());
        {
            std::vector<std::jthread> pool;
            for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
            work();
        }
        std::vector<Passage> out;
        for (auto& s : slots)
            if (s) out.push_back(std::move(*s));
        return out;
    }

    std::shared_ptr<SearchProvider> provider_;
    std::shared_ptr<PoliteClient> client_;
    std::shared_ptr<const SelectorConfig> selectors_;
    RetrieverConfig config_;
    Clock clock_;
    std::mutex warnMu_;
    std::vector<std::string> warnings_;
};

}  // namespace veritas::retrieval
