#pragma once

// HTTP clients for the inference sidecar. Wire formats:
//
//   POST /v1/nli/batch     {"pairs":[{"premise":..,"hypothesis":..}]}
//                       -> {"distributions":[{"entail":..,"contradict":..,"neutral":..}]}
//   POST /v1/consistency   {"document":..,"claim":..}      -> {"score":..}
//   POST /v1/slm/generate  {"task","model","headline","prompt","temperature","max_new_tokens","attempt"}
//                       -> {"text":..}
//   GET  /healthz          -> {"ready": bool}
//
// 400 and 413 are caller bugs (ContractViolation); 503 and transport failures
// are retried, then surface as RetryableError.

#include <chrono>
#include <memory>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "veritas/core.hpp"
#include "veritas/nli/backend.hpp"
#include "veritas/pipelines/slm.hpp"
#include "veritas/retrieval/url.hpp"

namespace veritas::sidecar {

struct ClientConfig {
    std::string baseUrl = "http://127.0.0.1:8000";
    std::chrono::milliseconds timeout{60000};
    int retries = 2;
    std::chrono::milliseconds backoffBase{250};
};

class HttpJsonClient {
public:
    explicit HttpJsonClient(ClientConfig config) : config_(std::move(config)) {
        const auto url = retrieval::Url::parse(config_.baseUrl);
        if (!url || (url->scheme != "http" && url->scheme != "https"))
            throw Error("backend URL must be http(s): " + config_.baseUrl);
        origin_ = url->origin();
        prefix_ = url->path() == "/" ? "" : url->path();
        while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    }

    const ClientConfig& config() const { return config_; }

    nlohmann::json post(const std::string& path, const nlohmann::json& body) const {
        return call(path, [&](httplib::Client& c, const std::string& p) {
            return c.Post(p, body.dump(), "application/json");
        });
    }

    nlohmann::json get(const std::string& path) const {
        return call(path, [](httplib::Client& c, const std::string& p) { return c.Get(p); });
    }

    bool healthy() const {
        try {
            const auto j = get("/healthz");
            return j.value("ready", false);
        } catch (const Error&) {
            return false;
        }
    }

private:
    template <typename Fn>
    nlohmann::json call(const std::string& path, Fn&& fn) const {
        std::string lastError;
        for (int attempt = 0; attempt <= config_.retries; ++attempt) {
            if (attempt > 0) std::this_thread::sleep_for(config_.backoffBase * (1 << (attempt - 1)));
            httplib::Client client(origin_);
            const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count();
            client.set_connection_timeout(secs, 0);
            client.set_read_timeout(secs, 0);
            client.set_write_timeout(secs, 0);
            auto res = fn(client, prefix_ + path);
            if (!res) {
                lastError = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 503) {
                lastError = "backend not ready (503)";
                continue;
            }
            if (res->status == 400 || res->status == 413)
                throw ContractViolation("backend rejected request to " + path + " (" + std::to_string(res->status) +
                                        "): " + res->body.substr(0, 200));
            if (res->status != 200)
                throw RetryableError("backend returned HTTP " + std::to_string(res->status) + " for " + path);
            try {
                return nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::exception& e) {
                throw ContractViolation("backend returned malformed JSON for " + path + ": " + e.what());
            }
        }
        throw RetryableError("backend at " + config_.baseUrl + " unreachable for " + path + " after " +
                             std::to_string(config_.retries + 1) + " attempts (" + lastError +
                             "); start the sidecar or pass --fixtures with a mock backend");
    }

    ClientConfig config_;
    std::string origin_;
    std::string prefix_;
};

class HttpNliBackend : public nli::NliBackend {
public:
    explicit HttpNliBackend(std::shared_ptr<HttpJsonClient> client) : client_(std::move(client)) {}

    std::vector<nli::NliDistribution> classify(std::span<const nli::SentencePair> pairs) override {
        if (pairs.empty()) return {};
        if (pairs.size() > maxBatch()) throw ContractViolation("NLI batch exceeds " + std::to_string(maxBatch()));
        nlohmann::json body;
        body["pairs"] = nlohmann::json::array();
        for (const auto& p : pairs) body["pairs"].push_back({{"premise", p.premise}, {"hypothesis", p.hypothesis}});
        const auto res = client_->post("/v1/nli/batch", body);
        try {
            const auto& ds = res.at("distributions");
            if (!ds.is_array() || ds.size() != pairs.size())
                throw ContractViolation("NLI response length differs from request length");
            std::vector<nli::NliDistribution> out;
            out.reserve(ds.size());
            for (const auto& d : ds)
                out.push_back({d.at("entail").get<double>(), d.at("contradict").get<double>(),
                               d.at("neutral").get<double>()});
            return out;
        } catch (const nlohmann::json::exception& e) {
            throw ContractViolation(std::string("malformed NLI response: ") + e.what());
        }
    }

private:
    std::shared_ptr<HttpJsonClient> client_;
};

class HttpConsistencyBackend : public nli::ConsistencyBackend {
public:
    explicit HttpConsistencyBackend(std::shared_ptr<HttpJsonClient> client) : client_(std::move(client)) {}

    double consistentProbability(const std::string& document, const std::string& claim) override {
        const auto res = client_->post("/v1/consistency", {{"document", document}, {"claim", claim}});
        try {
            return res.at("score").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw ContractViolation(std::string("malformed consistency response: ") + e.what());
        }
    }

private:
    std::shared_ptr<HttpJsonClient> client_;
};

class HttpSlmBackend : public pipelines::SlmBackend {
public:
    explicit HttpSlmBackend(std::shared_ptr<HttpJsonClient> client) : client_(std::move(client)) {}

    std::string generate(const pipelines::SlmRequest& r) override {
        nlohmann::json body = {{"task", std::string(toString(r.task))},
                               {"model", std::string(toString(r.model))},
                               {"headline", r.headline},
                               {"prompt", r.prompt},
                               {"temperature", r.temperature},
                               {"max_new_tokens", r.maxNewTokens},
                               {"attempt", r.attempt}};
        const auto res = client_->post("/v1/slm/generate", body);
        try {
            return res.at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ContractViolation(std::string("malformed SLM response: ") + e.what());
        }
    }

private:
    std::shared_ptr<HttpJsonClient> client_;
};

}  // namespace veritas::sidecar
