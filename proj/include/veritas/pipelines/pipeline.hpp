#pragma once

// Headline -> evidence -> premise -> score -> verdict, for the Article,
// Question-Answer and SLM pipelines.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "veritas/core.hpp"
#include "veritas/nli/backend.hpp"
#include "veritas/nli/factcc.hpp"
#include "veritas/nli/sentences.hpp"
#include "veritas/nli/summac.hpp"
#include "veritas/pipelines/slm.hpp"
#include "veritas/retrieval/evidence.hpp"

namespace veritas::pipelines {

using retrieval::Clock;
using retrieval::NoEvidenceError;
using retrieval::RetrievalStrategy;

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

/// Decision thresholds per (pipeline, scorer). FactCC is fixed at 0.5;
/// SummaC thresholds default to 0 until calibrated.
class Thresholds {
public:
    static constexpr double kSummacDefault = 0.0;

    double get(PipelineKind p, ScorerKind s) const {
        if (s == ScorerKind::FactCC) return nli::kFactccThreshold;
        auto it = values_.find(key(p, s));
        return it == values_.end() ? kSummacDefault : it->second;
    }

    bool calibrated(PipelineKind p, ScorerKind s) const { return values_.count(key(p, s)) > 0; }

    void set(PipelineKind p, ScorerKind s, double t) {
        if (s == ScorerKind::FactCC) throw Error("the FactCC threshold is fixed at 0.5");
        if (!std::isfinite(t) || t < -1.0 || t > 1.0) throw Error("threshold outside [-1, 1]");
        values_[key(p, s)] = t;
    }

    /// {"version":1,"thresholds":{"article/summac-zs":0.12,...}}
    nlohmann::json toJson() const {
        nlohmann::json j;
        j["version"] = 1;
        j["thresholds"] = nlohmann::json::object();
        for (const auto& [k, v] : values_) j["thresholds"][k] = v;
        return j;
    }

    static Thresholds fromJson(const nlohmann::json& j) {
        Thresholds t;
        try {
            if (j.at("version").get<int>() != 1) throw Error("unsupported thresholds version");
            for (const auto& [k, v] : j.at("thresholds").items()) {
                const auto slash = k.find('/');
                const auto p = parsePipelineKind(k.substr(0, slash));
                const auto s = slash == std::string::npos ? std::nullopt : parseScorerKind(k.substr(slash + 1));
                if (!p || !s) throw Error("unknown thresholds key '" + k + "'");
                t.set(*p, *s, v.get<double>());
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(std::string("malformed thresholds file: ") + e.what());
        }
        return t;
    }

    static Thresholds load(const std::string& path) {
        try {
            return fromJson(nlohmann::json::parse(text::readFile(path)));
        } catch (const nlohmann::json::parse_error& e) {
            throw Error("malformed thresholds file " + path + ": " + e.what());
        }
    }

    static std::string key(PipelineKind p, ScorerKind s) {
        return std::string(toString(p)) + "/" + std::string(toString(s));
    }

private:
    std::map<std::string, double> values_;
};

// ---------------------------------------------------------------------------
// Evidence cache
// ---------------------------------------------------------------------------

/// Retrieval results keyed by (namespace, strategy, k, query). Failures are
/// cached too so a batch re-scored with another scorer never re-scrapes.
class EvidenceCache {
public:
    using Entry = std::variant<EvidenceBundle, std::vector<EvidenceStage>>;

    std::optional<Entry> find(const std::string& key) const {
        std::lock_guard lock(mu_);
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void put(const std::string& key, Entry e) {
        std::lock_guard lock(mu_);
        map_.emplace(key, std::move(e));
    }

    std::size_t size() const {
        std::lock_guard lock(mu_);
        return map_.size();
    }

private:
    mutable std::mutex mu_;
    std::map<std::string, Entry> map_;
};

// ---------------------------------------------------------------------------
// Dependencies and results
// ---------------------------------------------------------------------------

struct PipelineDeps {
    std::shared_ptr<retrieval::Retriever> retriever;
    std::shared_ptr<nli::NliBackend> nli;
    std::shared_ptr<nli::ConsistencyBackend> consistency;
    std::shared_ptr<SlmBackend> slm;
    std::shared_ptr<const nli::SentenceSplitter> splitter;
    std::shared_ptr<const PromptTemplate> questionPrompt;
    nli::ConvScorerConfig conv = nli::rampConvConfig();
    Thresholds thresholds;
    int k = 3;
    std::size_t premiseSentenceCap = 60;
    Clock clock = retrieval::steadyClock();
    std::shared_ptr<EvidenceCache> cache;
    std::string cacheNamespace;  // e.g. fixture-set digest
};

struct ExplanationRecord {
    std::string headline;
    std::optional<std::string> generatedQuestion;
    std::optional<std::string> questionFallbackReason;  // set when the headline was used as the query
    EvidenceBundle evidence;
    std::string premise;  // exactly what the scorer saw
    ScorerKind scorer = ScorerKind::SummacZS;
    double score = 0.0;
    double threshold = 0.0;
    BinaryLabel verdict = BinaryLabel::Unreliable;
    std::vector<std::string> sourceUrls;
};

struct PipelineResult {
    VerdictRecord verdict;
    ExplanationRecord explanation;
};

/// NoEvidence annotated with the pipeline that hit it.
class PipelineNoEvidence : public NoEvidenceError {
public:
    PipelineNoEvidence(const NoEvidenceError& e, PipelineKind p)
        : NoEvidenceError(e.query(), e.attempted()), pipeline_(p) {}
    PipelineKind pipeline() const { return pipeline_; }

private:
    PipelineKind pipeline_;
};

// ---------------------------------------------------------------------------
// Building blocks
// ---------------------------------------------------------------------------

/// Passages in rank order separated by blank lines; beyond `cap` sentences
/// the kept sentences are rejoined one per line.
inline std::string assemblePremise(const EvidenceBundle& bundle, const nli::SentenceSplitter& splitter,
                                   std::size_t cap) {
    std::string premise;
    for (const auto& p : bundle.passages) {
        if (!premise.empty()) premise += "\n\n";
        premise += p.text;
    }
    if (cap == 0) return premise;
    auto sentences = splitter.split(premise);
    if (sentences.size() <= cap) return premise;
    sentences.resize(cap);
    return text::join(sentences, "\n");
}

inline EvidenceBundle fetchEvidence(const std::string& query, RetrievalStrategy strategy, PipelineDeps& deps) {
    if (!deps.retriever) throw Error("pipeline has no retriever configured");
    const std::string key = deps.cacheNamespace + "|" +
                            (strategy == RetrievalStrategy::ArticlesOnly ? "articles" : "chain") + "|" +
                            std::to_string(deps.k) + "|" + retrieval::normalizeQuery(query);
    if (deps.cache) {
        if (auto hit = deps.cache->find(key)) {
            if (auto* b = std::get_if<EvidenceBundle>(&*hit)) return *b;
            throw NoEvidenceError(query, std::get<std::vector<EvidenceStage>>(*hit));
        }
    }
    try {
        auto bundle = deps.retriever->retrieveEvidence(query, strategy, deps.k);
        bundle.validate();
        if (deps.cache) deps.cache->put(key, bundle);
        return bundle;
    } catch (const NoEvidenceError& e) {
        if (deps.cache) deps.cache->put(key, e.attempted());
        throw;
    }
}

/// Score of `headline` against `premise` under `scorer`.
inline double scoreClaim(const std::string& premise, const std::string& headline, ScorerKind scorer,
                         PipelineDeps& deps) {
    switch (scorer) {
        case ScorerKind::FactCC:
            if (!deps.consistency) throw Error("no consistency backend configured");
            return nli::factccClassify(premise, headline, *deps.consistency).score;
        case ScorerKind::SummacZS:
        case ScorerKind::SummacConv: {
            if (!deps.nli || !deps.splitter) throw Error("no NLI backend configured");
            const auto m = nli::buildPairMatrix(premise, headline, *deps.nli, *deps.splitter);
            const double s = scorer == ScorerKind::SummacZS ? nli::summacZsScore(m) : nli::summacConvScore(m, deps.conv);
            // entail - contradict can leave [-1, 1] by the simplex tolerance
            return std::clamp(s, -1.0, 1.0);
        }
    }
    throw Error("unknown scorer");
}

namespace detail {

inline PipelineResult finishRun(const std::string& claimId, const std::string& headline, PipelineKind pipeline,
                                ScorerKind scorer, EvidenceBundle evidence, StageTimings timings,
                                PipelineDeps& deps) {
    ExplanationRecord ex;
    ex.headline = headline;
    ex.premise = assemblePremise(evidence, *deps.splitter, deps.premiseSentenceCap);
    const double t0 = deps.clock();
    const double score = scoreClaim(ex.premise, headline, scorer, deps);
    timings.scoreSeconds = std::max(0.0, deps.clock() - t0);
    timings.scrapeSeconds = evidence.scrapeSeconds;

    const double threshold = deps.thresholds.get(pipeline, scorer);
    ex.sourceUrls = evidence.sourceUrls();
    ex.evidence = evidence;
    ex.scorer = scorer;
    ex.score = score;
    ex.threshold = threshold;
    auto verdict = VerdictRecord::make(claimId, pipeline, scorer, score, threshold, std::move(evidence), timings);
    ex.verdict = verdict.verdict;
    return {std::move(verdict), std::move(ex)};
}

inline void checkHeadline(const std::string& headline, const PipelineDeps& deps) {
    if (trimView(headline).empty()) throw Error("headline must be non-empty");
    if (!deps.splitter) throw Error("pipeline has no sentence splitter configured");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

inline PipelineResult runArticlePipeline(const std::string& headline, ScorerKind scorer, PipelineDeps& deps,
                                         const std::string& claimId = "") {
    detail::checkHeadline(headline, deps);
    try {
        auto ev = fetchEvidence(headline, RetrievalStrategy::ArticlesOnly, deps);
        return detail::finishRun(claimId, headline, PipelineKind::Article, scorer, std::move(ev), {}, deps);
    } catch (const PipelineNoEvidence&) {
        throw;
    } catch (const NoEvidenceError& e) {
        throw PipelineNoEvidence(e, PipelineKind::Article);
    }
}

inline PipelineResult runQuestionAnswerPipeline(const std::string& headline, ScorerKind scorer, PipelineDeps& deps,
                                                const std::string& claimId = "") {
    detail::checkHeadline(headline, deps);
    try {
        auto ev = fetchEvidence(headline, RetrievalStrategy::QuickAnswerChain, deps);
        return detail::finishRun(claimId, headline, PipelineKind::QuestionAnswer, scorer, std::move(ev), {}, deps);
    } catch (const PipelineNoEvidence&) {
        throw;
    } catch (const NoEvidenceError& e) {
        throw PipelineNoEvidence(e, PipelineKind::QuestionAnswer);
    }
}

inline PipelineResult runSlmPipeline(const std::string& headline, SlmKind kind, ScorerKind scorer,
                                     PipelineDeps& deps, const std::string& claimId = "") {
    detail::checkHeadline(headline, deps);
    if (!deps.slm || !deps.questionPrompt) throw Error("SLM pipeline needs an SLM backend and question prompt");
    const auto pipeline = kind == SlmKind::Mistral ? PipelineKind::SlmMistral : PipelineKind::SlmPhi3;

    StageTimings timings;
    std::optional<std::string> question;
    std::optional<std::string> fallback;
    const double q0 = deps.clock();
    try {
        question = generateQuestion(headline, *deps.slm, kind, *deps.questionPrompt);
    } catch (const QuestionGenFailure& e) {
        fallback = std::string("question generation failed: ") + e.what();
    } catch (const RetryableError& e) {
        fallback = std::string("SLM unavailable: ") + e.what();
    }
    timings.questionSeconds = std::max(0.0, deps.clock() - q0);

    try {
        auto ev = fetchEvidence(question.value_or(headline), RetrievalStrategy::QuickAnswerChain, deps);
        auto r = detail::finishRun(claimId, headline, pipeline, scorer, std::move(ev), timings, deps);
        r.explanation.generatedQuestion = question;
        r.explanation.questionFallbackReason = fallback;
        return r;
    } catch (const PipelineNoEvidence&) {
        throw;
    } catch (const NoEvidenceError& e) {
        throw PipelineNoEvidence(e, pipeline);
    }
}

inline PipelineResult runPipeline(PipelineKind pipeline, const std::string& headline, ScorerKind scorer,
                                  PipelineDeps& deps, const std::string& claimId = "") {
    switch (pipeline) {
        case PipelineKind::Article: return runArticlePipeline(headline, scorer, deps, claimId);
        case PipelineKind::QuestionAnswer: return runQuestionAnswerPipeline(headline, scorer, deps, claimId);
        case PipelineKind::SlmMistral: return runSlmPipeline(headline, SlmKind::Mistral, scorer, deps, claimId);
        case PipelineKind::SlmPhi3: return runSlmPipeline(headline, SlmKind::Phi3, scorer, deps, claimId);
    }
    throw Error("unknown pipeline");
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline constexpr int kExplanationSchemaVersion = 1;

inline nlohmann::json toJson(const EvidenceBundle& b) {
    nlohmann::json passages = nlohmann::json::array();
    for (const auto& p : b.passages) passages.push_back({{"source_url", p.sourceUrl}, {"text", p.text}});
    return {{"query", b.query},
            {"stage", std::string(toString(b.stage))},
            {"passages", passages},
            {"scrape_seconds", b.scrapeSeconds}};
}

inline nlohmann::json toJson(const PipelineResult& r) {
    const auto& v = r.verdict;
    const auto& e = r.explanation;
    nlohmann::json j;
    j["schema_version"] = kExplanationSchemaVersion;
    j["claim_id"] = v.claimId;
    j["headline"] = e.headline;
    j["pipeline"] = std::string(toString(v.pipeline));
    j["scorer"] = std::string(toString(v.scorer));
    j["score"] = v.score;
    j["threshold"] = v.threshold;
    j["verdict"] = std::string(toString(v.verdict));
    j["generated_question"] = e.generatedQuestion ? nlohmann::json(*e.generatedQuestion) : nlohmann::json(nullptr);
    j["question_fallback"] =
        e.questionFallbackReason ? nlohmann::json(*e.questionFallbackReason) : nlohmann::json(nullptr);
    j["stage"] = std::string(toString(v.evidence.stage));
    j["source_urls"] = e.sourceUrls;
    j["premise"] = e.premise;
    j["evidence"] = toJson(e.evidence);
    j["timings"] = {{"scrape_seconds", v.timings.scrapeSeconds},
                    {"score_seconds", v.timings.scoreSeconds},
                    {"question_seconds", v.timings.questionSeconds}};
    return j;
}

/// Structural check of an explanation document; returns the problems found.
inline std::vector<std::string> validateExplanationJson(const nlohmann::json& j) {
    std::vector<std::string> problems;
    auto need = [&](const char* key, auto pred, const char* what) {
        if (!j.contains(key) || !pred(j[key])) problems.push_back(std::string(key) + " must be " + what);
    };
    auto isStr = [](const nlohmann::json& v) { return v.is_string(); };
    auto isNum = [](const nlohmann::json& v) { return v.is_number(); };
    auto strOrNull = [](const nlohmann::json& v) { return v.is_string() || v.is_null(); };
    if (!j.is_object()) return {"document must be an object"};
    need("schema_version", [](const nlohmann::json& v) { return v == kExplanationSchemaVersion; }, "1");
    need("claim_id", isStr, "a string");
    need("headline", [](const nlohmann::json& v) { return v.is_string() && !v.get<std::string>().empty(); },
         "a non-empty string");
    need("pipeline", [](const nlohmann::json& v) { return v.is_string() && parsePipelineKind(v.get<std::string>()); },
         "a pipeline name");
    need("scorer", [](const nlohmann::json& v) { return v.is_string() && parseScorerKind(v.get<std::string>()); },
         "a scorer name");
    need("score", isNum, "a number");
    need("threshold", isNum, "a number");
    need("verdict", [](const nlohmann::json& v) { return v == "true" || v == "false"; }, "\"true\" or \"false\"");
    need("generated_question", strOrNull, "a string or null");
    need("question_fallback", strOrNull, "a string or null");
    need("stage", [](const nlohmann::json& v) { return v == "QuickAnswer" || v == "PeopleAlsoAsked" || v == "Articles"; },
         "an evidence stage");
    need("premise", [](const nlohmann::json& v) { return v.is_string() && !v.get<std::string>().empty(); },
         "a non-empty string");
    need("source_urls",
         [](const nlohmann::json& v) {
             if (!v.is_array() || v.empty()) return false;
             for (const auto& u : v)
                 if (!u.is_string()) return false;
             return true;
         },
         "a non-empty array of strings");
    need("evidence",
         [](const nlohmann::json& v) {
             return v.is_object() && v.contains("query") && v.contains("stage") && v.contains("passages") &&
                    v["passages"].is_array() && !v["passages"].empty();
         },
         "an evidence object with passages");
    need("timings",
         [](const nlohmann::json& v) {
             for (const char* k : {"scrape_seconds", "score_seconds", "question_seconds"})
                 if (!v.is_object() || !v.contains(k) || !v[k].is_number() || v[k].get<double>() < 0) return false;
             return true;
         },
         "an object of non-negative stage times");
    if (problems.empty()) {
        std::vector<std::string> distinct;
        for (const auto& p : j["evidence"]["passages"]) {
            const auto u = p.value("source_url", std::string());
            if (std::find(distinct.begin(), distinct.end(), u) == distinct.end()) distinct.push_back(u);
        }
        if (distinct != j["source_urls"].get<std::vector<std::string>>())
            problems.emplace_back("source_urls must equal the distinct passage URLs");
    }
    return problems;
}

}  // namespace veritas::pipelines
