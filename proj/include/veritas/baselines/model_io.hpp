#pragma once

// Versioned JSON serialization of fitted baseline models.

#include <string>

#include <json.hpp>

#include "veritas/baselines/logreg.hpp"
#include "veritas/baselines/naive_bayes.hpp"
#include "veritas/baselines/tfidf.hpp"

namespace veritas::baselines {

inline constexpr int kModelFormatVersion = 1;

struct BaselineBundle {
    TfIdfModel tfidf;
    NbModel nb;
    LogRegModel logreg;
};

namespace detail {
inline std::vector<std::string> vocabList(const std::map<std::string, std::size_t, std::less<>>& vocab) {
    std::vector<std::string> v(vocab.size());
    for (const auto& [tok, idx] : vocab) v[idx] = tok;
    return v;
}

inline std::map<std::string, std::size_t, std::less<>> vocabMap(const std::vector<std::string>& list) {
    std::map<std::string, std::size_t, std::less<>> m;
    for (std::size_t i = 0; i < list.size(); ++i)
        if (!m.emplace(list[i], i).second) throw Error("duplicate vocabulary entry in model file: " + list[i]);
    return m;
}
}  // namespace detail

inline nlohmann::json toJson(const BaselineBundle& b) {
    nlohmann::json j;
    j["format"] = "veritas-baselines";
    j["version"] = kModelFormatVersion;
    j["tfidf"] = {{"vocabulary", detail::vocabList(b.tfidf.vocabulary)},
                  {"doc_freq", b.tfidf.docFreq},
                  {"doc_count", b.tfidf.docCount},
                  {"idf", b.tfidf.idf}};
    j["naive_bayes"] = {{"alpha", b.nb.alpha},
                        {"vocabulary", detail::vocabList(b.nb.vocabulary)},
                        {"class_log_priors", {{"false", b.nb.classLogPriors[0]}, {"true", b.nb.classLogPriors[1]}}},
                        {"token_log_likelihoods",
                         {{"false", b.nb.tokenLogLikelihoods[0]}, {"true", b.nb.tokenLogLikelihoods[1]}}}};
    j["logistic_regression"] = {{"weights", b.logreg.weights},
                                {"bias", b.logreg.bias},
                                {"learning_rate", b.logreg.config.learningRate},
                                {"epochs", b.logreg.config.epochs},
                                {"l2", b.logreg.config.l2},
                                {"seed", b.logreg.config.seed}};
    return j;
}

inline BaselineBundle bundleFromJson(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "veritas-baselines") throw Error("not a baseline model file");
        if (j.at("version").get<int>() != kModelFormatVersion)
            throw Error("unsupported baseline model version " + j.at("version").dump());
        BaselineBundle b;
        const auto& t = j.at("tfidf");
        b.tfidf.vocabulary = detail::vocabMap(t.at("vocabulary").get<std::vector<std::string>>());
        b.tfidf.docFreq = t.at("doc_freq").get<std::vector<std::size_t>>();
        b.tfidf.docCount = t.at("doc_count").get<std::size_t>();
        b.tfidf.idf = t.at("idf").get<std::vector<double>>();
        const auto& nb = j.at("naive_bayes");
        b.nb.alpha = nb.at("alpha").get<double>();
        b.nb.vocabulary = detail::vocabMap(nb.at("vocabulary").get<std::vector<std::string>>());
        b.nb.classLogPriors = {nb.at("class_log_priors").at("false").get<double>(),
                               nb.at("class_log_priors").at("true").get<double>()};
        b.nb.tokenLogLikelihoods = {nb.at("token_log_likelihoods").at("false").get<std::vector<double>>(),
                                    nb.at("token_log_likelihoods").at("true").get<std::vector<double>>()};
        const auto& lr = j.at("logistic_regression");
        b.logreg.weights = lr.at("weights").get<std::vector<double>>();
        b.logreg.bias = lr.at("bias").get<double>();
        b.logreg.config.learningRate = lr.at("learning_rate").get<double>();
        b.logreg.config.epochs = lr.at("epochs").get<int>();
        b.logreg.config.l2 = lr.at("l2").get<double>();
        b.logreg.config.seed = lr.at("seed").get<std::uint64_t>();
        if (b.tfidf.docFreq.size() != b.tfidf.vocabulary.size() || b.tfidf.idf.size() != b.tfidf.vocabulary.size() ||
            b.logreg.weights.size() != b.tfidf.vocabulary.size())
            throw Error("baseline model arrays disagree with vocabulary size");
        for (const auto& ll : b.nb.tokenLogLikelihoods)
            if (ll.size() != b.nb.vocabulary.size()) throw Error("naive Bayes table disagrees with vocabulary size");
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed baseline model file: ") + e.what());
    }
}

}  // namespace veritas::baselines
