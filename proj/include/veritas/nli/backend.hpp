#pragma once

// Scoring backends: interfaces plus deterministic in-process mocks.
//
// HashNliBackend mirrors the inference service's mock mode (distribution
// derived from a hash of the pair). LexicalNliBackend and
// LexicalConsistencyBackend are crude token-overlap judges; they are not
// NLI models, but they move in the right direction on paraphrase, number
// swaps and negation, which keeps offline demos and fixtures readable.

#include <algorithm>
#include <cctype>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "veritas/nli/types.hpp"
#include "veritas/text.hpp"

namespace veritas::nli {

class NliBackend {
public:
    virtual ~NliBackend() = default;
    /// One distribution per pair, in request order.
    virtual std::vector<NliDistribution> classify(std::span<const SentencePair> pairs) = 0;
    virtual std::size_t maxBatch() const { return 256; }
};

class ConsistencyBackend {
public:
    virtual ~ConsistencyBackend() = default;
    /// Probability that `claim` is consistent with `document`.
    virtual double consistentProbability(const std::string& document, const std::string& claim) = 0;
};

// ---------------------------------------------------------------------------
// Mocks
// ---------------------------------------------------------------------------

class ConstantNliBackend : public NliBackend {
public:
    explicit ConstantNliBackend(NliDistribution d) : d_(d) {}

    std::vector<NliDistribution> classify(std::span<const SentencePair> pairs) override {
        std::lock_guard lock(mu_);
        ++calls_;
        pairCount_ += pairs.size();
        return std::vector<NliDistribution>(pairs.size(), d_);
    }

    std::size_t calls() const {
        std::lock_guard lock(mu_);
        return calls_;
    }
    std::size_t pairCount() const {
        std::lock_guard lock(mu_);
        return pairCount_;
    }

private:
    NliDistribution d_;
    mutable std::mutex mu_;
    std::size_t calls_ = 0;
    std::size_t pairCount_ = 0;
};

/// Deterministic pseudo-random distribution per pair.
class HashNliBackend : public NliBackend {
public:
    std::vector<NliDistribution> classify(std::span<const SentencePair> pairs) override {
        std::vector<NliDistribution> out;
        out.reserve(pairs.size());
        for (const auto& p : pairs) out.push_back(distributionFor(p.premise, p.hypothesis));
        return out;
    }

    static NliDistribution distributionFor(const std::string& premise, const std::string& hypothesis) {
        std::uint64_t h = text::fnv1a64(premise);
        h = text::fnv1a64("\x1f", h);
        h = text::fnv1a64(hypothesis, h);
        const double a = 1.0 + static_cast<double>((h >> 0) & 0xFFFF);
        const double b = 1.0 + static_cast<double>((h >> 16) & 0xFFFF);
        const double c = 1.0 + static_cast<double>((h >> 32) & 0xFFFF);
        const double s = a + b + c;
        NliDistribution d{a / s, b / s, 0.0};
        d.neutral = 1.0 - d.entail - d.contradict;
        return d;
    }
};

namespace detail {

inline const std::set<std::string, std::less<>>& lexicalStopwords() {
    static const std::set<std::string, std::less<>> kWords = {
        "a",   "an",   "the",  "of",   "in",   "on",   "at",   "to",  "for",  "and",  "or",
        "is",  "are",  "was",  "were", "be",   "been", "by",   "with", "as",  "that", "this",
        "it",  "its",  "from", "has",  "have", "had",  "his",  "her", "their", "s",   "who",
        "what", "which", "did", "does", "do",  "will", "after", "than", "into", "about"};
    return kWords;
}

inline bool isNegation(std::string_view t) {
    static const std::set<std::string, std::less<>> kNeg = {
        "not",   "no",    "never", "cannot", "didnt",  "doesnt", "dont",   "isnt", "wasnt",
        "wont",  "hasnt", "denies", "deny",  "denied", "fails",  "failed", "loses", "lost"};
    return kNeg.count(t) > 0;
}

struct LexicalProfile {
    std::set<std::string> content;
    std::set<std::string> numbers;
    bool negated = false;
};

inline LexicalProfile profile(std::string_view s) {
    LexicalProfile p;
    std::string tok;
    auto flush = [&] {
        if (tok.empty()) return;
        bool digits = std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        if (isNegation(tok)) p.negated = true;
        if (digits) p.numbers.insert(tok);
        else if (!lexicalStopwords().count(tok) && !isNegation(tok)) p.content.insert(tok);
        tok.clear();
    };
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c))) tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        else if (c == '\'') continue;  // "didn't" -> "didnt"
        else flush();
    }
    flush();
    return p;
}

struct LexicalJudgement {
    double coverage = 0.0;      // share of hypothesis content (words and numbers) found in premise
    bool numberConflict = false;  // hypothesis numbers missing while premise states numbers
    bool numberUnsupported = false;
    bool negationMismatch = false;
};

inline LexicalJudgement judge(std::string_view premise, std::string_view hypothesis) {
    const LexicalProfile p = profile(premise);
    const LexicalProfile h = profile(hypothesis);
    LexicalJudgement j;
    std::size_t total = h.content.size() + h.numbers.size();
    std::size_t hit = 0;
    for (const auto& t : h.content) hit += p.content.count(t);
    bool missingNumber = false;
    for (const auto& n : h.numbers) {
        if (p.numbers.count(n)) ++hit;
        else missingNumber = true;
    }
    j.coverage = total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
    j.numberConflict = missingNumber && !p.numbers.empty();
    j.numberUnsupported = missingNumber && p.numbers.empty();
    j.negationMismatch = p.negated != h.negated && j.coverage >= 0.5;
    return j;
}

}  // namespace detail

class LexicalNliBackend : public NliBackend {
public:
    std::vector<NliDistribution> classify(std::span<const SentencePair> pairs) override {
        std::vector<NliDistribution> out;
        out.reserve(pairs.size());
        for (const auto& p : pairs) out.push_back(distributionFor(p.premise, p.hypothesis));
        return out;
    }

    static NliDistribution distributionFor(std::string_view premise, std::string_view hypothesis) {
        const auto j = detail::judge(premise, hypothesis);
        NliDistribution d;
        if (j.numberConflict || j.negationMismatch) {
            d.contradict = 0.55 + 0.4 * j.coverage;
            d.entail = 0.02;
        } else {
            d.entail = 0.02 + 0.93 * j.coverage * (j.numberUnsupported ? 0.5 : 1.0);
            d.contradict = 0.03;
        }
        d.neutral = 1.0 - d.entail - d.contradict;
        return d;
    }
};

class ConstantConsistencyBackend : public ConsistencyBackend {
public:
    explicit ConstantConsistencyBackend(double p) : p_(p) {}
    double consistentProbability(const std::string&, const std::string&) override { return p_; }

private:
    double p_;
};

class HashConsistencyBackend : public ConsistencyBackend {
public:
    double consistentProbability(const std::string& document, const std::string& claim) override {
        std::uint64_t h = text::fnv1a64(document);
        h = text::fnv1a64("\x1e", h);
        h = text::fnv1a64(claim, h);
        return static_cast<double>(h % 1000001ULL) / 1000000.0;
    }
};

/// Document-level overlap: probability rises with the share of claim tokens
/// present anywhere in the document, and collapses on unsupported numbers.
class LexicalConsistencyBackend : public ConsistencyBackend {
public:
    double consistentProbability(const std::string& document, const std::string& claim) override {
        const auto j = detail::judge(document, claim);
        double p = 0.02 + 0.96 * j.coverage;
        if (j.numberConflict || j.numberUnsupported) p *= 0.2;
        return std::clamp(p, 0.0, 1.0);
    }
};

}  // namespace veritas::nli
