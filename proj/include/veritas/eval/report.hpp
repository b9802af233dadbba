#pragma once

// Report rendering in JSON, CSV and Markdown. Output depends only on the
// report contents, so identical inputs give identical bytes.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "veritas/eval/dataset.hpp"
#include "veritas/eval/metrics.hpp"

namespace veritas::eval {

inline constexpr int kReportSchemaVersion = 1;

enum class ReportFormat { Json, Csv, Markdown };

inline std::optional<ReportFormat> parseReportFormat(std::string_view s) {
    const std::string l = text::toLowerAscii(s);
    if (l == "json") return ReportFormat::Json;
    if (l == "csv") return ReportFormat::Csv;
    if (l == "markdown" || l == "md") return ReportFormat::Markdown;
    return std::nullopt;
}

struct ReportDoc {
    std::string title;
    std::vector<MetricsReport> metrics;
    std::optional<AgreementReport> agreement;
    std::optional<TimingStats> timing;
    std::vector<TimingRow> timingRows;
    nlohmann::json context = nlohmann::json::object();  // split sizes, thresholds and similar
};

namespace detail {

inline std::string fixed(double v, int places = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, v);
    return buf;
}

inline nlohmann::json metricsJson(const MetricsReport& m) {
    return {{"model", m.modelName},
            {"accuracy", m.accuracy},
            {"precision", m.precision},
            {"recall", m.recall},
            {"f1", m.f1},
            {"precision_undefined", m.precisionUndefined},
            {"recall_undefined", m.recallUndefined},
            {"confusion", {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"fn", m.confusion.fn}, {"tn", m.confusion.tn}}}};
}

inline std::string regionName(const std::vector<std::string>& models, std::size_t mask) {
    if (mask == 0) return "none";
    std::vector<std::string> parts;
    for (std::size_t m = 0; m < models.size(); ++m)
        if (mask & (std::size_t{1} << m)) parts.push_back(models[m]);
    return text::join(parts, " & ");
}

inline nlohmann::json agreementJson(const AgreementReport& a) {
    nlohmann::json models = nlohmann::json::array();
    for (std::size_t m = 0; m < a.models.size(); ++m)
        models.push_back({{"model", a.models[m]},
                          {"correct", a.correct[m].size()},
                          {"incorrect", a.incorrect[m].size()},
                          {"unique_correct", std::vector<std::string>(a.uniqueCorrect[m].begin(), a.uniqueCorrect[m].end())},
                          {"unique_incorrect",
                           std::vector<std::string>(a.uniqueIncorrect[m].begin(), a.uniqueIncorrect[m].end())}});
    nlohmann::json regions = nlohmann::json::array();
    for (std::size_t mask = 0; mask < a.correctRegions.size(); ++mask)
        regions.push_back({{"models", regionName(a.models, mask)},
                           {"correct", a.correctRegions[mask]},
                           {"incorrect", a.incorrectRegions[mask]}});
    return {{"evaluated", a.ids.size()}, {"models", models}, {"regions", regions}};
}

inline nlohmann::json timingJson(const TimingStats& t, const std::vector<TimingRow>& rows) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : t.stages)
        stages.push_back({{"stage", s.stage},
                          {"count", s.count},
                          {"mean", s.mean},
                          {"min", s.min},
                          {"q1", s.q1},
                          {"median", s.median},
                          {"q3", s.q3},
                          {"max", s.max},
                          {"whisker_low", s.whiskerLow},
                          {"whisker_high", s.whiskerHigh},
                          {"outliers", s.outliers}});
    nlohmann::json sums = nlohmann::json::array();
    for (const auto& r : rows)
        sums.push_back({{"model", r.name}, {"scrape_mean", r.scrapeMean}, {"score_mean", r.scoreMean}, {"total", r.total()}});
    return {{"stages", stages}, {"sums", sums}, {"warnings", t.warnings}};
}

}  // namespace detail

inline std::string emitReport(const ReportDoc& doc, ReportFormat format) {
    if (doc.metrics.empty()) throw Error("report has no metrics");
    switch (format) {
        case ReportFormat::Json: {
            nlohmann::json j;
            j["schema_version"] = kReportSchemaVersion;
            j["title"] = doc.title;
            j["positive_class"] = kPositiveClass;
            j["context"] = doc.context;
            j["metrics"] = nlohmann::json::array();
            for (const auto& m : doc.metrics) j["metrics"].push_back(detail::metricsJson(m));
            j["agreement"] = doc.agreement ? detail::agreementJson(*doc.agreement) : nlohmann::json(nullptr);
            j["timing"] = doc.timing ? detail::timingJson(*doc.timing, doc.timingRows) : nlohmann::json(nullptr);
            return j.dump(2) + "\n";
        }
        case ReportFormat::Csv: {
            std::string out = csvLine({"model", "tp", "fp", "fn", "tn", "accuracy", "precision", "recall", "f1"});
            for (const auto& m : doc.metrics)
                out += csvLine({m.modelName, std::to_string(m.confusion.tp), std::to_string(m.confusion.fp),
                                std::to_string(m.confusion.fn), std::to_string(m.confusion.tn),
                                detail::fixed(m.accuracy, 6), detail::fixed(m.precision, 6),
                                detail::fixed(m.recall, 6), detail::fixed(m.f1, 6)});
            return out;
        }
        case ReportFormat::Markdown: {
            std::string out = "# " + (doc.title.empty() ? std::string("Evaluation report") : doc.title) + "\n\n";
            out += "Positive class: Reliable (label `true`).\n\n";
            out += "| Model | Precision | Recall | F1 | Accuracy |\n|---|---|---|---|---|\n";
            for (const auto& m : doc.metrics)
                out += "| " + m.modelName + " | " + detail::fixed(m.precision) + (m.precisionUndefined ? "*" : "") +
                       " | " + detail::fixed(m.recall) + (m.recallUndefined ? "*" : "") + " | " +
                       detail::fixed(m.f1) + " | " + detail::fixed(m.accuracy) + " |\n";
            bool undefined = false;
            for (const auto& m : doc.metrics) undefined |= m.precisionUndefined || m.recallUndefined;
            if (undefined) out += "\n\\* zero denominator, reported as 0.\n";
            if (!doc.timingRows.empty()) {
                out += "\n## Mean times (s): scrape / score / sum\n\n| Model | Scrape | Score | Sum |\n|---|---|---|---|\n";
                for (const auto& r : doc.timingRows)
                    out += "| " + r.name + " | " + detail::fixed(r.scrapeMean) + " | " + detail::fixed(r.scoreMean) +
                           " | " + detail::fixed(r.total()) + " |\n";
            }
            if (doc.agreement) {
                const auto& a = *doc.agreement;
                out += "\n## Unique decisions\n\n| Model | Correct | Incorrect | Unique correct | Unique incorrect |\n"
                       "|---|---|---|---|---|\n";
                for (std::size_t m = 0; m < a.models.size(); ++m)
                    out += "| " + a.models[m] + " | " + std::to_string(a.correct[m].size()) + " | " +
                           std::to_string(a.incorrect[m].size()) + " | " + std::to_string(a.uniqueCorrect[m].size()) +
                           " | " + std::to_string(a.uniqueIncorrect[m].size()) + " |\n";
            }
            return out;
        }
    }
    throw Error("unknown report format");
}

/// Long-format (stage, sample) CSV for plotting.
inline std::string timingSamplesCsv(const std::map<std::string, std::vector<double>>& samples) {
    std::string out = csvLine({"stage", "seconds"});
    for (const auto& [stage, xs] : samples)
        for (double x : xs) out += csvLine({stage, detail::fixed(x, 6)});
    return out;
}

}  // namespace veritas::eval
