#pragma once

// Classification metrics (Reliable is the positive class), agreement
// regions across models, and timing summaries.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "veritas/core.hpp"

namespace veritas::eval {

inline constexpr std::string_view kPositiveClass = "true";

struct Confusion {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    long total() const { return tp + fp + fn + tn; }
    bool operator==(const Confusion&) const = default;
};

struct MetricsReport {
    std::string modelName;
    Confusion confusion;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precisionUndefined = false;  // no positive predictions
    bool recallUndefined = false;     // no positive labels
};

inline MetricsReport metricsFromConfusion(const Confusion& c, std::string modelName = "") {
    if (c.tp < 0 || c.fp < 0 || c.fn < 0 || c.tn < 0 || c.total() == 0)
        throw Error("confusion counts must be non-negative with a positive total");
    MetricsReport m;
    m.modelName = std::move(modelName);
    m.confusion = c;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    m.precisionUndefined = c.tp + c.fp == 0;
    m.recallUndefined = c.tp + c.fn == 0;
    m.precision = m.precisionUndefined ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    m.recall = m.recallUndefined ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

inline MetricsReport computeMetrics(const std::vector<BinaryLabel>& predictions, const std::vector<BinaryLabel>& labels,
                                    std::string modelName = "") {
    if (predictions.size() != labels.size())
        throw Error("predictions (" + std::to_string(predictions.size()) + ") and labels (" +
                    std::to_string(labels.size()) + ") differ in length");
    if (predictions.empty()) throw Error("metrics need at least one prediction");
    Confusion c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool p = predictions[i] == BinaryLabel::Reliable, y = labels[i] == BinaryLabel::Reliable;
        (p ? (y ? c.tp : c.fp) : (y ? c.fn : c.tn)) += 1;
    }
    return metricsFromConfusion(c, std::move(modelName));
}

// ---------------------------------------------------------------------------
// Agreement
// ---------------------------------------------------------------------------

struct ModelPredictions {
    std::string name;
    std::map<std::string, BinaryLabel> byId;
};

inline constexpr std::size_t kMaxRegionModels = 4;

struct AgreementReport {
    std::vector<std::string> models;
    std::vector<std::string> ids;  // sorted
    std::vector<std::set<std::string>> correct;
    std::vector<std::set<std::string>> incorrect;
    std::vector<std::set<std::string>> uniqueCorrect;    // correct for this model only
    std::vector<std::set<std::string>> uniqueIncorrect;  // incorrect for this model only
    // Exact Venn regions: entry `mask` counts ids that are correct (resp.
    // incorrect) for exactly the models whose bits are set. Entry 0 counts
    // ids no model got correct (resp. wrong). Empty above kMaxRegionModels.
    std::vector<long> correctRegions;
    std::vector<long> incorrectRegions;
};

inline AgreementReport agreementAnalysis(const std::vector<ModelPredictions>& models,
                                         const std::map<std::string, BinaryLabel>& labels) {
    if (models.size() < 2) throw Error("agreement analysis needs at least two models");
    AgreementReport r;
    for (const auto& [id, _] : labels) r.ids.push_back(id);
    for (const auto& m : models) {
        if (m.byId.size() != labels.size() ||
            !std::equal(m.byId.begin(), m.byId.end(), labels.begin(),
                        [](const auto& a, const auto& b) { return a.first == b.first; }))
            throw Error("model '" + m.name + "' was evaluated on a different id set");
        r.models.push_back(m.name);
        std::set<std::string> ok, bad;
        for (const auto& [id, pred] : m.byId) (pred == labels.at(id) ? ok : bad).insert(id);
        r.correct.push_back(std::move(ok));
        r.incorrect.push_back(std::move(bad));
    }
    const std::size_t n = models.size();
    r.uniqueCorrect.resize(n);
    r.uniqueIncorrect.resize(n);
    const bool regions = n <= kMaxRegionModels;
    if (regions) {
        r.correctRegions.assign(std::size_t{1} << n, 0);
        r.incorrectRegions.assign(std::size_t{1} << n, 0);
    }
    for (const auto& id : r.ids) {
        std::size_t okMask = 0, badMask = 0, okCount = 0, badCount = 0;
        for (std::size_t m = 0; m < n; ++m) {
            if (r.correct[m].count(id)) {
                okMask |= std::size_t{1} << m;
                ++okCount;
            } else {
                badMask |= std::size_t{1} << m;
                ++badCount;
            }
        }
        for (std::size_t m = 0; m < n; ++m) {
            if (okCount == 1 && r.correct[m].count(id)) r.uniqueCorrect[m].insert(id);
            if (badCount == 1 && r.incorrect[m].count(id)) r.uniqueIncorrect[m].insert(id);
        }
        if (regions) {
            ++r.correctRegions[okMask];
            ++r.incorrectRegions[badMask];
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Timing
// ---------------------------------------------------------------------------

/// Type-7 sample quantile (linear interpolation between order statistics).
inline double quantile7(std::vector<double> xs, double p) {
    if (xs.empty()) throw Error("quantile of an empty sample");
    std::sort(xs.begin(), xs.end());
    const double h = (static_cast<double>(xs.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

struct StageSummary {
    std::string stage;
    std::size_t count = 0;
    double mean = 0.0, min = 0.0, max = 0.0;
    double q1 = 0.0, median = 0.0, q3 = 0.0;
    double whiskerLow = 0.0, whiskerHigh = 0.0;  // furthest samples within 1.5 IQR of the box
    std::size_t outliers = 0;
};

struct TimingStats {
    std::vector<StageSummary> stages;  // in stage-name order
    std::vector<std::string> warnings;

    const StageSummary* find(std::string_view stage) const {
        for (const auto& s : stages)
            if (s.stage == stage) return &s;
        return nullptr;
    }
};

inline StageSummary summarizeStage(std::string stage, const std::vector<double>& xs) {
    if (xs.empty()) throw Error("stage '" + stage + "' has no samples");
    StageSummary s;
    s.stage = std::move(stage);
    s.count = xs.size();
    double sum = 0.0;
    for (double x : xs) {
        if (!std::isfinite(x)) throw Error("non-finite timing sample in stage '" + s.stage + "'");
        sum += x;
    }
    s.mean = std::clamp(sum / static_cast<double>(xs.size()), *std::min_element(xs.begin(), xs.end()),
                        *std::max_element(xs.begin(), xs.end()));
    s.min = *std::min_element(xs.begin(), xs.end());
    s.max = *std::max_element(xs.begin(), xs.end());
    s.q1 = quantile7(xs, 0.25);
    s.median = quantile7(xs, 0.5);
    s.q3 = quantile7(xs, 0.75);
    const double iqr = s.q3 - s.q1, loFence = s.q1 - 1.5 * iqr, hiFence = s.q3 + 1.5 * iqr;
    s.whiskerLow = s.max;
    s.whiskerHigh = s.min;
    for (double x : xs) {
        if (x < loFence || x > hiFence) {
            ++s.outliers;
            continue;
        }
        s.whiskerLow = std::min(s.whiskerLow, x);
        s.whiskerHigh = std::max(s.whiskerHigh, x);
    }
    return s;
}

inline TimingStats timingStats(const std::map<std::string, std::vector<double>>& samples) {
    TimingStats t;
    for (const auto& [stage, xs] : samples) {
        if (xs.empty()) {
            t.warnings.push_back("stage '" + stage + "' has no samples; omitted");
            continue;
        }
        t.stages.push_back(summarizeStage(stage, xs));
    }
    return t;
}

/// Mean scrape, mean score and their sum for one pipeline/scorer pairing.
struct TimingRow {
    std::string name;
    double scrapeMean = 0.0;
    double scoreMean = 0.0;
    double total() const { return scrapeMean + scoreMean; }
};

inline std::string formatTimingRow(const TimingRow& r) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.4f / %.4f / %.4f", r.scrapeMean, r.scoreMean, r.total());
    return buf;
}

}  // namespace veritas::eval
