#pragma once

// Page fetching: the Fetcher interface, fixture replay, and the polite
// client that every retrieval request goes through (robots.txt gate,
// per-host serialization, inter-request delay, bounded retries, manual
// redirect following so each hop is robots-checked).

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "veritas/retrieval/robots.hpp"
#include "veritas/retrieval/url.hpp"

namespace veritas::retrieval {

class RobotsDisallowed : public Error {
public:
    using Error::Error;
};

class FetchError : public RetryableError {
public:
    using RetryableError::RetryableError;
};

struct FetchResult {
    int status = 0;  // 0 = transport failure
    std::string body;
    std::string location;  // redirect target for 3xx
    std::string error;

    bool ok() const { return status >= 200 && status < 300; }
};

class Fetcher {
public:
    virtual ~Fetcher() = default;
    virtual FetchResult get(const Url& url) = 0;
};

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

/// Lowercase, whitespace-collapsed query used as the SERP fixture key.
inline std::string normalizeQuery(std::string_view q) {
    return text::toLowerAscii(text::normalizeWhitespace(q));
}

/// Page fixture file stem: hex digest of the canonical URL.
inline std::string fixtureKey(const Url& url) { return text::hex64(text::fnv1a64(url.str())); }

/// Recorded pages and SERPs. Directory layout:
///
///   index.json            {"version": 1, "serps": {"<normalized query>": "<file>"},
///                          "pages": {"<url>": "<file>"}}
///   pages/<key>.html      one file per page, key = fixtureKey(url), body verbatim
///
/// Files named in index.json are relative to the directory; the "pages" map
/// is optional and checked before pages/.
///
/// Stores can also be populated in memory, which tests use heavily.
class FixtureStore {
public:
    FixtureStore() = default;

    static FixtureStore load(const std::filesystem::path& dir) {
        FixtureStore store;
        store.dir_ = dir;
        const auto indexPath = dir / "index.json";
        if (!std::filesystem::exists(indexPath))
            throw Error("fixture directory has no index.json: " + dir.string());
        nlohmann::json idx;
        try {
            idx = nlohmann::json::parse(text::readFile(indexPath.string()));
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed fixture index " + indexPath.string() + ": " + e.what());
        }
        if (idx.value("version", 0) != 1) throw Error("unsupported fixture index version in " + indexPath.string());
        if (idx.contains("serps")) {
            for (const auto& [q, file] : idx["serps"].items())
                store.serpFiles_[normalizeQuery(q)] = file.get<std::string>();
        }
        if (idx.contains("pages")) {
            for (const auto& [u, file] : idx["pages"].items())
                store.pageFiles_[fixtureKey(mustParse(u))] = file.get<std::string>();
        }
        return store;
    }

    void addPage(const Url& url, std::string body) { pages_[fixtureKey(url)] = std::move(body); }
    void addPage(std::string_view url, std::string body) { addPage(mustParse(url), std::move(body)); }
    void addSerp(std::string_view query, std::string body) { serps_[normalizeQuery(query)] = std::move(body); }

    std::optional<std::string> page(const Url& url) const {
        const std::string key = fixtureKey(url);
        if (auto it = pages_.find(key); it != pages_.end()) return it->second;
        if (auto it = pageFiles_.find(key); it != pageFiles_.end()) return text::readFile((dir_ / it->second).string());
        if (!dir_.empty()) {
            const auto p = dir_ / "pages" / (key + ".html");
            if (std::filesystem::exists(p)) return text::readFile(p.string());
        }
        return std::nullopt;
    }

    std::optional<std::string> serp(std::string_view query) const {
        const std::string key = normalizeQuery(query);
        if (auto it = serps_.find(key); it != serps_.end()) return it->second;
        if (auto it = serpFiles_.find(key); it != serpFiles_.end()) return text::readFile((dir_ / it->second).string());
        return std::nullopt;
    }

    /// Writes pages and SERPs held in memory to `dir` in the on-disk layout.
    void save(const std::filesystem::path& dir) const {
        std::filesystem::create_directories(dir / "pages");
        std::filesystem::create_directories(dir / "serps");
        nlohmann::json idx;
        idx["version"] = 1;
        idx["serps"] = nlohmann::json::object();
        for (const auto& [q, file] : serpFiles_) idx["serps"][q] = file;
        for (const auto& [q, body] : serps_) {
            const std::string file = "serps/" + text::hex64(text::fnv1a64(q)) + ".html";
            text::writeFile((dir / file).string(), body);
            idx["serps"][q] = file;
        }
        for (const auto& [key, body] : pages_) text::writeFile((dir / "pages" / (key + ".html")).string(), body);
        text::writeFile((dir / "index.json").string(), idx.dump(2) + "\n");
    }

    /// Stable digest of the store contents, used to key evidence caches.
    std::string digest() const {
        std::uint64_t h = text::fnv1a64(dir_.string());
        for (const auto& [k, v] : serpFiles_) h = text::fnv1a64(k + "\x1f" + v, h);
        for (const auto& [k, v] : serps_) h = text::fnv1a64(k + "\x1f" + v, h);
        for (const auto& [k, v] : pageFiles_) h = text::fnv1a64(k + "\x1f" + v, h);
        for (const auto& [k, v] : pages_) h = text::fnv1a64(k + "\x1f" + v, h);
        return text::hex64(h);
    }

private:
    static Url mustParse(std::string_view s) {
        auto u = Url::parse(s);
        if (!u) throw Error("invalid fixture URL: " + std::string(s));
        return *u;
    }

    std::filesystem::path dir_;
    std::map<std::string, std::string> serpFiles_;
    std::map<std::string, std::string> pageFiles_;
    std::map<std::string, std::string> serps_;
    std::map<std::string, std::string> pages_;
};

/// Serves pages from a FixtureStore; missing pages are 404. Records every
/// requested URL.
class FixtureFetcher : public Fetcher {
public:
    explicit FixtureFetcher(std::shared_ptr<const FixtureStore> store) : store_(std::move(store)) {}

    FetchResult get(const Url& url) override {
        {
            std::lock_guard lock(mu_);
            log_.push_back(url.str());
        }
        if (auto body = store_->page(url)) return {200, std::move(*body), {}, {}};
        return {404, {}, {}, "no fixture for " + url.str()};
    }

    std::vector<std::string> requestLog() const {
        std::lock_guard lock(mu_);
        return log_;
    }

private:
    std::shared_ptr<const FixtureStore> store_;
    mutable std::mutex mu_;
    std::vector<std::string> log_;
};

// ---------------------------------------------------------------------------
// Polite client
// ---------------------------------------------------------------------------

struct PolitenessConfig {
    std::string userAgent = "veritas-bot/1.0";
    std::chrono::milliseconds minDelay{500};
    int retries = 2;
    std::chrono::milliseconds backoffBase{500};
    int maxRedirects = 5;
};

class PoliteClient {
public:
    PoliteClient(std::shared_ptr<Fetcher> inner, PolitenessConfig config)
        : inner_(std::move(inner)), config_(std::move(config)) {}

    const PolitenessConfig& config() const { return config_; }

    /// Fetches `url` if robots.txt for its host allows it, following
    /// redirects (each hop checked). Throws RobotsDisallowed for a
    /// disallowed URL and FetchError once retries are exhausted.
    FetchResult get(const Url& url) {
        Url cur = url;
        for (int hop = 0; hop <= config_.maxRedirects; ++hop) {
            FetchResult r = getOne(cur);
            if (r.status >= 300 && r.status < 400 && !r.location.empty()) {
                auto next = resolveHref(cur, r.location);
                if (!next) return r;
                cur = *next;
                continue;
            }
            return r;
        }
        throw FetchError("too many redirects fetching " + url.str());
    }

    /// Robots policy for `url`'s host, fetched once per host.
    RobotsPolicy robotsFor(const Url& url) {
        auto& st = hostState(url);
        std::lock_guard lock(st.mu);
        return ensureRobots(st, url);
    }

    bool allowed(const Url& url) {
        return isAllowed(robotsFor(url), url.target, config_.userAgent);
    }

private:
    struct HostState {
        std::mutex mu;
        std::optional<std::chrono::steady_clock::time_point> last;
        std::optional<RobotsPolicy> robots;
    };

    HostState& hostState(const Url& url) {
        std::lock_guard lock(mapMu_);
        auto& p = hosts_[url.scheme + "://" + url.authority()];
        if (!p) p = std::make_unique<HostState>();
        return *p;
    }

    // Caller holds st.mu.
    FetchResult rawWithRetries(HostState& st, const Url& url) {
        FetchResult r;
        for (int attempt = 0; attempt <= config_.retries; ++attempt) {
            if (attempt > 0) std::this_thread::sleep_for(config_.backoffBase * (1 << (attempt - 1)));
            if (st.last) {
                const auto ready = *st.last + config_.minDelay;
                const auto now = std::chrono::steady_clock::now();
                if (ready > now) std::this_thread::sleep_for(ready - now);
            }
            r = inner_->get(url);
            st.last = std::chrono::steady_clock::now();
            if (r.status != 0 && r.status < 500) return r;
        }
        return r;
    }

    // Caller holds st.mu.
    const RobotsPolicy& ensureRobots(HostState& st, const Url& url) {
        if (st.robots) return *st.robots;
        Url robotsUrl = url;
        robotsUrl.target = "/robots.txt";
        FetchResult r = rawWithRetries(st, robotsUrl);
        RobotsPolicy policy;
        if (r.ok()) {
            policy = parseRobots(r.body, url.authority());
        } else {
            policy = RobotsPolicy::allowAll(url.authority());
            policy.warning = r.status == 0 || r.status >= 500;
        }
        policy.status = r.status;
        st.robots = std::move(policy);
        return *st.robots;
    }

    FetchResult getOne(const Url& url) {
        auto& st = hostState(url);
        std::lock_guard lock(st.mu);  // one request in flight per host
        const RobotsPolicy& policy = ensureRobots(st, url);
        if (!isAllowed(policy, url.target, config_.userAgent))
            throw RobotsDisallowed("robots.txt disallows " + url.str());
        FetchResult r = rawWithRetries(st, url);
        if (r.status == 0 || r.status >= 500)
            throw FetchError("fetch failed for " + url.str() + " (status " + std::to_string(r.status) +
                             (r.error.empty() ? "" : ", " + r.error) + ")");
        return r;
    }

    std::shared_ptr<Fetcher> inner_;
    PolitenessConfig config_;
    std::mutex mapMu_;
    std::unordered_map<std::string, std::unique_ptr<HostState>> hosts_;
};

}  // namespace veritas::retrieval
