#pragma once

// Text preprocessing and TF-IDF vectorization.
//
//   tf(t, d)  = f(t, d) / sum over t' in d of f(t', d)
//   idf(t, D) = log(N / |{d in D : t in d}|)        natural log, unsmoothed

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "veritas/text.hpp"

namespace veritas::baselines {

using Tokens = std::vector<std::string>;

struct Lexicon {
    std::set<std::string, std::less<>> stopwords;
    std::unordered_map<std::string, std::string> lemmas;  // inflected form -> root

    /// Stopword file: one word per line. Lemma file: "form<TAB>root" per line.
    static Lexicon load(const std::string& stopwordPath, const std::string& lemmaPath) {
        Lexicon lx;
        for (auto& w : text::readListFile(stopwordPath)) lx.stopwords.insert(text::toLowerAscii(w));
        for (const auto& line : text::readListFile(lemmaPath)) {
            auto parts = text::splitWhitespace(line);
            if (parts.size() != 2) throw Error("malformed lemma table line: " + line);
            lx.lemmas[text::toLowerAscii(parts[0])] = text::toLowerAscii(parts[1]);
        }
        return lx;
    }
};

/// Lowercase, keep purely alphabetic tokens (edge punctuation stripped),
/// drop stopwords, map through the lemma table. Order preserved.
inline Tokens preprocess(std::string_view input, const Lexicon& lx) {
    Tokens out;
    for (auto& raw : text::splitWhitespace(input)) {
        std::size_t b = 0, e = raw.size();
        while (b < e && std::ispunct(static_cast<unsigned char>(raw[b]))) ++b;
        while (e > b && std::ispunct(static_cast<unsigned char>(raw[e - 1]))) --e;
        if (b == e) continue;
        std::string tok = text::toLowerAscii(std::string_view(raw).substr(b, e - b));
        if (!std::all_of(tok.begin(), tok.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }))
            continue;
        if (lx.stopwords.count(tok)) continue;
        if (auto it = lx.lemmas.find(tok); it != lx.lemmas.end()) tok = it->second;
        out.push_back(std::move(tok));
    }
    return out;
}

/// Ordered (index, weight) pairs with strictly increasing indices.
struct SparseVector {
    std::vector<std::pair<std::size_t, double>> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }

    double weightAt(std::size_t index) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), index,
                                   [](const auto& e, std::size_t i) { return e.first < i; });
        return it != entries.end() && it->first == index ? it->second : 0.0;
    }

    double dot(const std::vector<double>& dense) const {
        double s = 0.0;
        for (const auto& [i, w] : entries) s += w * dense[i];
        return s;
    }

    static SparseVector fromDense(const std::vector<double>& dense) {
        SparseVector v;
        for (std::size_t i = 0; i < dense.size(); ++i)
            if (dense[i] != 0.0) v.entries.emplace_back(i, dense[i]);
        return v;
    }
};

struct TfIdfModel {
    std::map<std::string, std::size_t, std::less<>> vocabulary;  // token -> column, columns in sorted token order
    std::vector<std::size_t> docFreq;
    std::size_t docCount = 0;
    std::vector<double> idf;

    std::size_t dims() const { return vocabulary.size(); }
};

inline TfIdfModel fitTfIdf(const std::vector<Tokens>& corpus) {
    if (corpus.empty()) throw TrainingError("cannot fit TF-IDF on an empty corpus");
    std::map<std::string, std::size_t, std::less<>> df;
    for (const auto& doc : corpus) {
        std::set<std::string_view> seen(doc.begin(), doc.end());
        for (auto t : seen) ++df[std::string(t)];
    }
    if (df.empty()) throw TrainingError("cannot fit TF-IDF: every document is empty");
    TfIdfModel m;
    m.docCount = corpus.size();
    const double n = static_cast<double>(corpus.size());
    for (auto& [tok, count] : df) {
        m.vocabulary.emplace(tok, m.docFreq.size());
        m.docFreq.push_back(count);
        m.idf.push_back(std::log(n / static_cast<double>(count)));
    }
    return m;
}

/// Out-of-vocabulary tokens contribute to the tf denominator but get no weight.
inline SparseVector transform(const TfIdfModel& model, const Tokens& doc) {
    SparseVector v;
    if (doc.empty()) return v;
    std::map<std::size_t, std::size_t> counts;
    for (const auto& t : doc)
        if (auto it = model.vocabulary.find(t); it != model.vocabulary.end()) ++counts[it->second];
    const double total = static_cast<double>(doc.size());
    for (const auto& [idx, c] : counts) v.entries.emplace_back(idx, static_cast<double>(c) / total * model.idf[idx]);
    return v;
}

}  // namespace veritas::baselines
