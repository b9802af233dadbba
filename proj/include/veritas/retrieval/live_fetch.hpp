#pragma once

// Network fetcher over cpp-httplib. Redirects are returned to the caller
// (PoliteClient follows them) so that every hop passes the robots gate.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <string>

#include <httplib.h>

#include "veritas/retrieval/fetch.hpp"

namespace veritas::retrieval {

struct LiveFetchConfig {
    std::string userAgent = "veritas-bot/1.0";
    std::chrono::seconds timeout{10};
    std::string proxyHost;  // empty = no proxy
    int proxyPort = 0;

    /// Applies VERITAS_USER_AGENT and HTTPS_PROXY / HTTP_PROXY when set.
    static LiveFetchConfig fromEnv() { return fromEnv(LiveFetchConfig()); }

    static LiveFetchConfig fromEnv(LiveFetchConfig base) {
        if (const char* ua = std::getenv("VERITAS_USER_AGENT"); ua && *ua) base.userAgent = ua;
        for (const char* name : {"HTTPS_PROXY", "https_proxy", "HTTP_PROXY", "http_proxy"}) {
            const char* v = std::getenv(name);
            if (!v || !*v) continue;
            std::string raw = v;
            if (raw.find("://") == std::string::npos) raw = "http://" + raw;
            if (auto u = Url::parse(raw)) {
                base.proxyHost = u->host;
                base.proxyPort = u->port;
                break;
            }
        }
        return base;
    }
};

class LiveFetcher : public Fetcher {
public:
    explicit LiveFetcher(LiveFetchConfig config) : config_(std::move(config)) {}

    FetchResult get(const Url& url) override {
        requestCount().fetch_add(1);
        httplib::Client cli(url.scheme + "://" + url.host + ":" + std::to_string(url.port));
        cli.set_connection_timeout(config_.timeout);
        cli.set_read_timeout(config_.timeout);
        cli.set_write_timeout(config_.timeout);
        cli.set_follow_location(false);
        if (!config_.proxyHost.empty()) cli.set_proxy(config_.proxyHost, config_.proxyPort);
        httplib::Headers headers = {{"User-Agent", config_.userAgent},
                                    {"Accept", "text/html,text/plain;q=0.9,*/*;q=0.5"},
                                    {"Accept-Language", "en-US,en;q=0.8"}};
        auto res = cli.Get(url.target, headers);
        FetchResult out;
        if (!res) {
            out.status = 0;
            out.error = httplib::to_string(res.error());
            return out;
        }
        out.status = res->status;
        out.body = std::move(res->body);
        if (res->has_header("Location")) out.location = res->get_header_value("Location");
        return out;
    }

    /// Process-wide count of network requests issued; offline runs assert it stays 0.
    static std::atomic<long>& requestCount() {
        static std::atomic<long> count{0};
        return count;
    }

private:
    LiveFetchConfig config_;
};

}  // namespace veritas::retrieval
