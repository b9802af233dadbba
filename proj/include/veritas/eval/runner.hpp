#pragma once

// Batch evaluation: run pipeline/scorer combinations over a dataset,
// calibrate SummaC thresholds on the calibration split, and measure the
// reporting split.

#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "veritas/eval/dataset.hpp"
#include "veritas/eval/metrics.hpp"
#include "veritas/eval/report.hpp"
#include "veritas/eval/split.hpp"
#include "veritas/nli/calibration.hpp"
#include "veritas/pipelines/pipeline.hpp"

namespace veritas::eval {

struct Combo {
    PipelineKind pipeline = PipelineKind::Article;
    ScorerKind scorer = ScorerKind::SummacZS;

    std::string name() const { return std::string(toString(pipeline)) + "+" + std::string(toString(scorer)); }
    bool operator==(const Combo&) const = default;
};

struct RecordOutcome {
    std::optional<double> score;  // absent when retrieval found nothing
    std::optional<EvidenceStage> stage;
    StageTimings timings;
    bool questionFallback = false;
};

struct ComboRun {
    Combo combo;
    std::vector<RecordOutcome> outcomes;  // dataset order
};

/// Runs every combination on every record with up to `workers` records in
/// flight. Combinations for one record run back to back so the evidence
/// cache serves the later scorers.
inline std::vector<ComboRun> runBatch(const Dataset& d, const std::vector<Combo>& combos,
                                      pipelines::PipelineDeps& deps, int workers = 1) {
    if (combos.empty()) throw Error("no pipeline/scorer combinations to run");
    std::vector<ComboRun> runs;
    for (const auto& c : combos) runs.push_back({c, std::vector<RecordOutcome>(d.records.size())});

    std::atomic<std::size_t> next{0};
    std::mutex errMu;
    std::exception_ptr firstError;
    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= d.records.size()) return;
            {
                std::lock_guard lock(errMu);
                if (firstError) return;
            }
            const auto& rec = d.records[i];
            try {
                for (auto& run : runs) {
                    auto& out = run.outcomes[i];
                    try {
                        auto r = pipelines::runPipeline(run.combo.pipeline, rec.text, run.combo.scorer, deps, rec.id);
                        out.score = r.verdict.score;
                        out.stage = r.verdict.evidence.stage;
                        out.timings = r.verdict.timings;
                        out.questionFallback = r.explanation.questionFallbackReason.has_value();
                    } catch (const retrieval::NoEvidenceError&) {
                        out.score.reset();
                    }
                }
            } catch (...) {
                std::lock_guard lock(errMu);
                if (!firstError) firstError = std::current_exception();
                return;
            }
        }
    };
    const int n = std::max(1, std::min<int>(workers, static_cast<int>(d.records.size())));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < n; ++t) pool.emplace_back(work);
        work();
    }
    if (firstError) std::rethrow_exception(firstError);
    return runs;
}

struct EvalConfig {
    double calibFraction = 0.2;
    std::uint64_t seed = 42;
    double gridStep = 0.01;
    int workers = 1;
};

struct ComboResult {
    Combo combo;
    double threshold = 0.0;
    std::optional<nli::CalibrationResult> calibration;
    MetricsReport metrics;
    std::size_t noEvidence = 0;  // reporting-split records predicted Unreliable for lack of evidence
    std::map<std::string, BinaryLabel> predictions;  // reporting split, by id
};

struct EvalReport {
    std::string datasetName;
    EvalConfig config;
    std::vector<std::string> calibrationIds;
    std::vector<std::string> reportingIds;
    std::vector<ComboResult> combos;
    std::optional<AgreementReport> agreement;
    TimingStats timing;
    std::map<std::string, std::vector<double>> timingSamples;
    std::vector<TimingRow> timingRows;
    pipelines::Thresholds thresholds;
    std::vector<std::string> warnings;
};

inline EvalReport evaluate(const Dataset& d, const std::vector<Combo>& combos, pipelines::PipelineDeps& deps,
                           const EvalConfig& config) {
    if (d.records.size() < 2) throw Error("evaluation needs at least two records");
    const auto split = stratifiedSplit(d, config.calibFraction, config.seed);
    EvalReport rep;
    rep.datasetName = d.name;
    rep.config = config;
    for (auto i : split.calibration) rep.calibrationIds.push_back(d.records[i].id);
    for (auto i : split.reporting) rep.reportingIds.push_back(d.records[i].id);
    {
        const std::set<std::string> calib(rep.calibrationIds.begin(), rep.calibrationIds.end());
        for (const auto& id : rep.reportingIds)
            if (calib.count(id)) throw ContractViolation("id '" + id + "' appears in both splits");
    }
    rep.thresholds = deps.thresholds;

    const auto runs = runBatch(d, combos, deps, config.workers);
    std::map<std::string, std::vector<double>> samples;
    std::set<PipelineKind> scrapeSampled;
    std::map<std::string, BinaryLabel> labels;
    for (auto i : split.reporting) labels[d.records[i].id] = *d.records[i].label;

    for (const auto& run : runs) {
        ComboResult cr;
        cr.combo = run.combo;
        if (run.combo.scorer != ScorerKind::FactCC) {
            std::vector<double> scores;
            std::vector<BinaryLabel> ys;
            for (auto i : split.calibration)
                if (run.outcomes[i].score) {
                    scores.push_back(*run.outcomes[i].score);
                    ys.push_back(*d.records[i].label);
                }
            try {
                auto cal = nli::calibrateThreshold(scores, ys, config.gridStep, config.seed);
                rep.thresholds.set(run.combo.pipeline, run.combo.scorer, cal.threshold);
                cr.calibration = cal;
            } catch (const CalibrationError& e) {
                rep.warnings.push_back(run.combo.name() + ": calibration skipped (" + e.what() +
                                       "); using threshold " +
                                       std::to_string(rep.thresholds.get(run.combo.pipeline, run.combo.scorer)));
            }
        }
        cr.threshold = rep.thresholds.get(run.combo.pipeline, run.combo.scorer);

        std::vector<BinaryLabel> preds, ys;
        TimingRow row{run.combo.name()};
        std::size_t timed = 0;
        const std::string pname(toString(run.combo.pipeline));
        const bool sampleScrape = scrapeSampled.insert(run.combo.pipeline).second;
        for (std::size_t k = 0; k < split.reporting.size(); ++k) {
            const auto i = split.reporting[k];
            const auto& o = run.outcomes[i];
            BinaryLabel p = BinaryLabel::Unreliable;
            if (o.score) {
                p = decide(*o.score, cr.threshold);
                row.scrapeMean += o.timings.scrapeSeconds;
                row.scoreMean += o.timings.scoreSeconds;
                ++timed;
                samples[pname + "/" + std::string(toString(run.combo.scorer))].push_back(o.timings.scoreSeconds);
                if (sampleScrape) {
                    samples[pname + "/scrape"].push_back(o.timings.scrapeSeconds);
                    if (run.combo.pipeline == PipelineKind::SlmMistral || run.combo.pipeline == PipelineKind::SlmPhi3)
                        samples[pname + "/question"].push_back(o.timings.questionSeconds);
                }
            } else {
                ++cr.noEvidence;
            }
            preds.push_back(p);
            ys.push_back(*d.records[i].label);
            cr.predictions[d.records[i].id] = p;
        }
        if (timed) {
            row.scrapeMean /= static_cast<double>(timed);
            row.scoreMean /= static_cast<double>(timed);
            rep.timingRows.push_back(row);
        }
        cr.metrics = computeMetrics(preds, ys, run.combo.name());
        rep.combos.push_back(std::move(cr));
    }
    if (rep.combos.size() >= 2) {
        std::vector<ModelPredictions> models;
        for (const auto& c : rep.combos) models.push_back({c.combo.name(), c.predictions});
        rep.agreement = agreementAnalysis(models, labels);
    }
    rep.timing = timingStats(samples);
    rep.timingSamples = std::move(samples);
    for (const auto& w : rep.timing.warnings) rep.warnings.push_back(w);
    return rep;
}

inline ReportDoc toReportDoc(const EvalReport& r) {
    ReportDoc doc;
    doc.title = "Evaluation of " + r.datasetName + " (reporting split)";
    for (const auto& c : r.combos) doc.metrics.push_back(c.metrics);
    doc.agreement = r.agreement;
    doc.timing = r.timing;
    doc.timingRows = r.timingRows;
    nlohmann::json combos = nlohmann::json::array();
    for (const auto& c : r.combos) {
        nlohmann::json cj = {{"model", c.combo.name()}, {"threshold", c.threshold}, {"no_evidence", c.noEvidence}};
        cj["calibrated"] = c.calibration.has_value();
        if (c.calibration) cj["calibration_accuracy"] = c.calibration->accuracyAtThreshold;
        combos.push_back(cj);
    }
    doc.context = {{"dataset", r.datasetName},
                   {"split", {{"calibration_fraction", r.config.calibFraction},
                              {"seed", r.config.seed},
                              {"calibration_size", r.calibrationIds.size()},
                              {"reporting_size", r.reportingIds.size()}}},
                   {"grid_step", r.config.gridStep},
                   {"models", combos},
                   {"warnings", r.warnings}};
    return doc;
}

}  // namespace veritas::eval
