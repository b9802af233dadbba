#pragma once

// Domain types shared across the library: labels, claim records, verdicts,
// and the error hierarchy.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace veritas {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed dataset content (bad label, missing column, duplicate id, ...).
class DatasetFormatError : public Error {
public:
    using Error::Error;
};

/// Transient infrastructure failure: backend or provider outage after retries.
class RetryableError : public Error {
public:
    using Error::Error;
};

/// A collaborator returned data that violates its declared contract.
class ContractViolation : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

enum class SixWayLabel { True, MostlyTrue, HalfTrue, BarelyTrue, False, PantsFire };

inline constexpr std::array<SixWayLabel, 6> kAllSixWayLabels = {
    SixWayLabel::True,       SixWayLabel::MostlyTrue, SixWayLabel::HalfTrue,
    SixWayLabel::BarelyTrue, SixWayLabel::False,      SixWayLabel::PantsFire};

// Ordering is significant: Reliable > Unreliable for report tie-breaking.
enum class BinaryLabel { Unreliable = 0, Reliable = 1 };

inline constexpr BinaryLabel mapLiarLabel(SixWayLabel raw) {
    switch (raw) {
        case SixWayLabel::True:
        case SixWayLabel::MostlyTrue:
        case SixWayLabel::HalfTrue:
            return BinaryLabel::Reliable;
        case SixWayLabel::BarelyTrue:
        case SixWayLabel::False:
        case SixWayLabel::PantsFire:
            return BinaryLabel::Unreliable;
    }
    return BinaryLabel::Unreliable;
}

inline std::string_view toString(SixWayLabel l) {
    switch (l) {
        case SixWayLabel::True: return "true";
        case SixWayLabel::MostlyTrue: return "mostly-true";
        case SixWayLabel::HalfTrue: return "half-true";
        case SixWayLabel::BarelyTrue: return "barely-true";
        case SixWayLabel::False: return "false";
        case SixWayLabel::PantsFire: return "pants-fire";
    }
    return "false";
}

/// Reports use the "true"/"false" spelling.
inline std::string_view toString(BinaryLabel l) {
    return l == BinaryLabel::Reliable ? "true" : "false";
}

namespace detail {
inline std::string normalizeLabelText(std::string_view s) {
    std::string out;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isspace(u) || c == '_' || c == '-') {
            if (!out.empty() && out.back() != '-') out.push_back('-');
        } else {
            out.push_back(static_cast<char>(std::tolower(u)));
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}
}  // namespace detail

/// Accepts LIAR spellings in any casing, with spaces, hyphens or underscores
/// ("Pants on Fire", "pants-fire", "MOSTLY_TRUE").
inline std::optional<SixWayLabel> parseSixWayLabel(std::string_view text) {
    const std::string norm = detail::normalizeLabelText(text);
    if (norm == "true") return SixWayLabel::True;
    if (norm == "mostly-true") return SixWayLabel::MostlyTrue;
    if (norm == "half-true") return SixWayLabel::HalfTrue;
    if (norm == "barely-true") return SixWayLabel::BarelyTrue;
    if (norm == "false") return SixWayLabel::False;
    if (norm == "pants-fire" || norm == "pants-on-fire") return SixWayLabel::PantsFire;
    return std::nullopt;
}

/// "true"/"false" (any case) or "1"/"0".
inline std::optional<BinaryLabel> parseBinaryLabel(std::string_view text) {
    std::string norm = detail::normalizeLabelText(text);
    if (norm == "true" || norm == "1" || norm == "reliable") return BinaryLabel::Reliable;
    if (norm == "false" || norm == "0" || norm == "unreliable") return BinaryLabel::Unreliable;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Claims
// ---------------------------------------------------------------------------

inline std::string_view trimView(std::string_view s) {
    auto issp = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && issp(s.front())) s.remove_prefix(1);
    while (!s.empty() && issp(s.back())) s.remove_suffix(1);
    return s;
}

struct ClaimRecord {
    std::string id;
    std::string text;
    std::optional<BinaryLabel> label;
    std::optional<SixWayLabel> rawLabel;
    std::optional<std::string> source;
    std::optional<std::string> domainTag;

    /// Enforces non-empty text and label/rawLabel agreement.
    void validate() const {
        if (trimView(text).empty())
            throw DatasetFormatError("claim '" + id + "' has empty text");
        if (label && rawLabel && *label != mapLiarLabel(*rawLabel))
            throw DatasetFormatError("claim '" + id + "' label disagrees with its LIAR label");
    }
};

// ---------------------------------------------------------------------------
// Pipelines and scorers
// ---------------------------------------------------------------------------

enum class PipelineKind { Article, QuestionAnswer, SlmMistral, SlmPhi3 };
enum class ScorerKind { FactCC, SummacZS, SummacConv };

inline constexpr std::array<PipelineKind, 4> kAllPipelines = {
    PipelineKind::Article, PipelineKind::QuestionAnswer, PipelineKind::SlmMistral,
    PipelineKind::SlmPhi3};
inline constexpr std::array<ScorerKind, 3> kAllScorers = {
    ScorerKind::FactCC, ScorerKind::SummacZS, ScorerKind::SummacConv};

inline std::string_view toString(PipelineKind p) {
    switch (p) {
        case PipelineKind::Article: return "article";
        case PipelineKind::QuestionAnswer: return "qa";
        case PipelineKind::SlmMistral: return "slm-mistral";
        case PipelineKind::SlmPhi3: return "slm-phi3";
    }
    return "article";
}

inline std::string_view toString(ScorerKind s) {
    switch (s) {
        case ScorerKind::FactCC: return "factcc";
        case ScorerKind::SummacZS: return "summac-zs";
        case ScorerKind::SummacConv: return "summac-conv";
    }
    return "factcc";
}

inline std::optional<PipelineKind> parsePipelineKind(std::string_view s) {
    for (auto p : kAllPipelines)
        if (toString(p) == s) return p;
    return std::nullopt;
}

inline std::optional<ScorerKind> parseScorerKind(std::string_view s) {
    for (auto k : kAllScorers)
        if (toString(k) == s) return k;
    return std::nullopt;
}

struct ScoreRange {
    double lo;
    double hi;
};

inline constexpr ScoreRange scoreRange(ScorerKind s) {
    return s == ScorerKind::FactCC ? ScoreRange{0.0, 1.0} : ScoreRange{-1.0, 1.0};
}

inline BinaryLabel decide(double score, double threshold) {
    return score >= threshold ? BinaryLabel::Reliable : BinaryLabel::Unreliable;
}

/// Throws ContractViolation when `score` is non-finite or outside the scorer's range.
inline void checkScoreRange(ScorerKind scorer, double score) {
    const auto r = scoreRange(scorer);
    if (!std::isfinite(score) || score < r.lo || score > r.hi)
        throw ContractViolation("score " + std::to_string(score) + " outside range of " +
                                std::string(toString(scorer)));
}


// ---------------------------------------------------------------------------
// Evidence and verdicts
// ---------------------------------------------------------------------------

enum class EvidenceStage { QuickAnswer, PeopleAlsoAsked, Articles };

inline std::string_view toString(EvidenceStage s) {
    switch (s) {
        case EvidenceStage::QuickAnswer: return "QuickAnswer";
        case EvidenceStage::PeopleAlsoAsked: return "PeopleAlsoAsked";
        case EvidenceStage::Articles: return "Articles";
    }
    return "Articles";
}

struct Passage {
    std::string sourceUrl;
    std::string text;

    bool operator==(const Passage&) const = default;
};

struct EvidenceBundle {
    std::string query;
    EvidenceStage stage = EvidenceStage::Articles;
    std::vector<Passage> passages;
    double scrapeSeconds = 0.0;

    void validate() const {
        if (passages.empty()) throw ContractViolation("evidence bundle has no passages");
        for (const auto& p : passages)
            if (trimView(p.text).empty()) throw ContractViolation("evidence passage is empty");
        if (stage == EvidenceStage::QuickAnswer && passages.size() != 1)
            throw ContractViolation("quick-answer evidence must hold exactly one passage");
        if (!(scrapeSeconds >= 0.0)) throw ContractViolation("negative scrape time");
    }

    /// Distinct passage URLs in first-seen order.
    std::vector<std::string> sourceUrls() const {
        std::vector<std::string> urls;
        for (const auto& p : passages)
            if (std::find(urls.begin(), urls.end(), p.sourceUrl) == urls.end())
                urls.push_back(p.sourceUrl);
        return urls;
    }
};

struct StageTimings {
    double scrapeSeconds = 0.0;
    double scoreSeconds = 0.0;
    double questionSeconds = 0.0;  // SLM question generation, zero elsewhere

    double total() const { return scrapeSeconds + scoreSeconds; }
};

struct VerdictRecord {
    std::string claimId;
    PipelineKind pipeline = PipelineKind::Article;
    ScorerKind scorer = ScorerKind::SummacZS;
    double score = 0.0;
    double threshold = 0.0;
    BinaryLabel verdict = BinaryLabel::Unreliable;
    EvidenceBundle evidence;
    StageTimings timings;

    /// Builds a record whose verdict is derived from score and threshold.
    static VerdictRecord make(std::string claimId, PipelineKind pipeline, ScorerKind scorer,
                              double score, double threshold, EvidenceBundle evidence,
                              StageTimings timings) {
        checkScoreRange(scorer, score);
        if (!std::isfinite(threshold)) throw ContractViolation("non-finite threshold");
        if (!(timings.scrapeSeconds >= 0.0) || !(timings.scoreSeconds >= 0.0) ||
            !std::isfinite(timings.scrapeSeconds) || !std::isfinite(timings.scoreSeconds))
            throw ContractViolation("stage timings must be finite and non-negative");
        VerdictRecord r;
        r.claimId = std::move(claimId);
        r.pipeline = pipeline;
        r.scorer = scorer;
        r.score = score;
        r.threshold = threshold;
        r.verdict = decide(score, threshold);
        r.evidence = std::move(evidence);
        r.timings = timings;
        return r;
    }
};

}  // namespace veritas
