#pragma once

// Multinomial Naive Bayes over raw token counts with additive smoothing.

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "veritas/baselines/tfidf.hpp"
#include "veritas/core.hpp"

namespace veritas::baselines {

struct NbModel {
    double alpha = 1.0;
    std::map<std::string, std::size_t, std::less<>> vocabulary;
    // Index 0 = Unreliable, 1 = Reliable (BinaryLabel's underlying value).
    std::array<double, 2> classLogPriors{};
    std::array<std::vector<double>, 2> tokenLogLikelihoods;
};

inline std::size_t classIndex(BinaryLabel l) { return static_cast<std::size_t>(l); }

inline NbModel trainNb(const std::vector<Tokens>& docs, const std::vector<BinaryLabel>& labels, double alpha = 1.0) {
    if (docs.size() != labels.size()) throw TrainingError("documents and labels differ in length");
    if (!(alpha > 0.0)) throw TrainingError("smoothing alpha must be positive");
    std::array<std::size_t, 2> classDocs{};
    for (auto l : labels) ++classDocs[classIndex(l)];
    if (classDocs[0] == 0 || classDocs[1] == 0) throw TrainingError("naive Bayes needs both classes in training data");

    NbModel m;
    m.alpha = alpha;
    for (const auto& d : docs)
        for (const auto& t : d) m.vocabulary.emplace(t, 0);
    std::size_t col = 0;
    for (auto& [tok, idx] : m.vocabulary) idx = col++;
    const std::size_t v = m.vocabulary.size();

    std::array<std::vector<double>, 2> counts{std::vector<double>(v, 0.0), std::vector<double>(v, 0.0)};
    std::array<double, 2> totals{};
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const std::size_t c = classIndex(labels[i]);
        for (const auto& t : docs[i]) {
            counts[c][m.vocabulary.find(t)->second] += 1.0;
            totals[c] += 1.0;
        }
    }
    const double n = static_cast<double>(docs.size());
    for (std::size_t c = 0; c < 2; ++c) {
        m.classLogPriors[c] = std::log(static_cast<double>(classDocs[c]) / n);
        const double denom = totals[c] + alpha * static_cast<double>(v);
        m.tokenLogLikelihoods[c].resize(v);
        for (std::size_t k = 0; k < v; ++k) m.tokenLogLikelihoods[c][k] = std::log((counts[c][k] + alpha) / denom);
    }
    return m;
}

/// Unnormalized log joint log P(c) + sum_t count(t) log P(t | c); unseen tokens ignored.
inline std::array<double, 2> nbLogJoint(const NbModel& m, const Tokens& doc) {
    std::array<double, 2> s = m.classLogPriors;
    for (const auto& t : doc) {
        auto it = m.vocabulary.find(t);
        if (it == m.vocabulary.end()) continue;
        for (std::size_t c = 0; c < 2; ++c) s[c] += m.tokenLogLikelihoods[c][it->second];
    }
    return s;
}

/// Posterior P(Reliable | doc).
inline double nbPosteriorReliable(const NbModel& m, const Tokens& doc) {
    const auto s = nbLogJoint(m, doc);
    const double mx = std::max(s[0], s[1]);
    const double e0 = std::exp(s[0] - mx), e1 = std::exp(s[1] - mx);
    return e1 / (e0 + e1);
}

/// Ties go to Unreliable.
inline BinaryLabel predictNb(const NbModel& m, const Tokens& doc) {
    const auto s = nbLogJoint(m, doc);
    return s[1] > s[0] ? BinaryLabel::Reliable : BinaryLabel::Unreliable;
}

}  // namespace veritas::baselines
