#pragma once

// Command-line front end. `runCli` is the whole program minus main(), so
// tests drive it in-process with captured streams.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "veritas/baselines/model_io.hpp"
#include "veritas/eval/baseline_eval.hpp"
#include "veritas/eval/dataset.hpp"
#include "veritas/eval/report.hpp"
#include "veritas/eval/runner.hpp"
#include "veritas/nli/backend.hpp"
#include "veritas/pipelines/pipeline.hpp"
#include "veritas/pipelines/slm.hpp"
#include "veritas/retrieval/evidence.hpp"
#include "veritas/retrieval/live_fetch.hpp"
#include "veritas/sidecar.hpp"

#ifndef VERITAS_DATA_DIR
#define VERITAS_DATA_DIR "data"
#endif

namespace veritas::cli {

enum ExitCode { kOk = 0, kFailure = 1, kNoEvidence = 2, kInfrastructure = 3 };

inline constexpr const char* kDefaultBackendUrl = "http://127.0.0.1:8000";

struct RunConfig {
    std::vector<PipelineKind> pipelines;
    std::vector<ScorerKind> scorers;
    int k = 3;
    std::string backendUrl;  // resolved; "mock:<kind>" selects in-process mocks
    std::optional<std::string> fixtureDir;
    std::uint64_t seed = 42;
    double calibFraction = 0.2;
    bool json = false;
    std::optional<std::string> reportPath;
    std::string dataDir = VERITAS_DATA_DIR;
    std::optional<std::string> thresholdsPath;
    std::optional<std::string> convWeightsPath;
    std::optional<std::string> slmScriptPath;
    std::string userAgent = "veritas-bot/1.0";
    std::string searchTemplate = retrieval::kDefaultSearchTemplate;
    bool freezeClock = false;
    int workers = 1;

    bool offline() const { return fixtureDir.has_value(); }

    void validate() const {
        if (!(calibFraction > 0.0 && calibFraction < 1.0)) throw Error("--calib-frac must lie in (0, 1)");
        if (k < 1) throw Error("--k must be at least 1");
        if (workers < 1) throw Error("--workers must be at least 1");
    }
};

/// Values given on the command line; unset fields fall back to the
/// environment, then the config file, then defaults.
struct CliOverrides {
    std::vector<std::string> pipelines, scorers;
    std::optional<int> k;
    std::optional<std::string> backendUrl, fixtureDir, reportPath, dataDir, thresholdsPath, convWeightsPath,
        slmScriptPath, configPath, searchTemplate;
    std::optional<std::uint64_t> seed;
    std::optional<double> calibFraction;
    std::optional<int> workers;
    bool json = false;
    bool freezeClock = false;
};

inline std::optional<std::string> envVar(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

inline RunConfig resolveConfig(const CliOverrides& o) {
    nlohmann::json file = nlohmann::json::object();
    if (o.configPath) {
        try {
            file = nlohmann::json::parse(text::readFile(*o.configPath));
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed config file " + *o.configPath + ": " + e.what());
        }
        if (!file.is_object()) throw Error("config file must hold a JSON object");
    }
    auto fromFile = [&](const char* key) -> std::optional<nlohmann::json> {
        if (file.contains(key)) return file[key];
        return std::nullopt;
    };
    auto str = [&](const std::optional<std::string>& flag, const char* env,
                   const char* key) -> std::optional<std::string> {
        if (flag) return flag;
        if (env)
            if (auto e = envVar(env)) return e;
        if (auto f = fromFile(key)) return f->get<std::string>();
        return std::nullopt;
    };

    RunConfig c;
    try {
        c.fixtureDir = str(o.fixtureDir, nullptr, "fixtures");
        if (auto b = str(o.backendUrl, "VERITAS_BACKEND_URL", "backend_url")) {
            c.backendUrl = *b;
        } else {
            c.backendUrl = c.fixtureDir ? "mock:lexical" : kDefaultBackendUrl;
        }
        if (auto ua = str(std::nullopt, "VERITAS_USER_AGENT", "user_agent")) c.userAgent = *ua;
        if (auto d = str(o.dataDir, "VERITAS_DATA_DIR", "data_dir")) c.dataDir = *d;
        c.reportPath = str(o.reportPath, nullptr, "report");
        c.thresholdsPath = str(o.thresholdsPath, nullptr, "thresholds");
        c.convWeightsPath = str(o.convWeightsPath, nullptr, "conv_weights");
        c.slmScriptPath = str(o.slmScriptPath, nullptr, "slm_script");
        if (auto t = str(o.searchTemplate, nullptr, "search_template")) c.searchTemplate = *t;
        c.k = o.k ? *o.k : fromFile("k") ? fromFile("k")->get<int>() : 3;
        c.seed = o.seed ? *o.seed : fromFile("seed") ? fromFile("seed")->get<std::uint64_t>() : 42;
        c.calibFraction = o.calibFraction ? *o.calibFraction
                          : fromFile("calib_frac") ? fromFile("calib_frac")->get<double>()
                                                   : 0.2;
        c.workers = o.workers ? *o.workers : fromFile("workers") ? fromFile("workers")->get<int>() : 1;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("config file value has the wrong type: ") + e.what());
    }
    c.json = o.json;
    c.freezeClock = o.freezeClock;
    for (const auto& p : o.pipelines) {
        auto k = parsePipelineKind(p);
        if (!k) throw Error("unknown pipeline '" + p + "'");
        c.pipelines.push_back(*k);
    }
    for (const auto& s : o.scorers) {
        auto k = parseScorerKind(s);
        if (!k) throw Error("unknown scorer '" + s + "'");
        c.scorers.push_back(*k);
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Wiring
// ---------------------------------------------------------------------------

struct Runtime {
    RunConfig config;
    pipelines::PipelineDeps deps;
    std::shared_ptr<retrieval::FixtureStore> fixtures;
    std::shared_ptr<retrieval::FixtureFetcher> fixtureFetcher;
    std::shared_ptr<pipelines::SlmBackend> slm;
};

inline std::string dataPath(const RunConfig& c, const std::string& rel) {
    return (std::filesystem::path(c.dataDir) / rel).string();
}

inline std::shared_ptr<pipelines::SlmBackend> makeSlm(const RunConfig& c) {
    if (text::startsWith(c.backendUrl, "mock:")) {
        std::optional<std::string> script = c.slmScriptPath;
        if (!script && c.fixtureDir && std::filesystem::exists(std::filesystem::path(*c.fixtureDir) / "slm.json"))
            script = (std::filesystem::path(*c.fixtureDir) / "slm.json").string();
        if (script) return pipelines::ScriptedSlmBackend::load(*script);
        return std::make_shared<pipelines::ScriptedSlmBackend>();
    }
    return std::make_shared<sidecar::HttpSlmBackend>(
        std::make_shared<sidecar::HttpJsonClient>(sidecar::ClientConfig{c.backendUrl}));
}

inline Runtime buildRuntime(const RunConfig& c) {
    Runtime rt;
    rt.config = c;
    auto& d = rt.deps;

    auto selectors =
        std::make_shared<const retrieval::SelectorConfig>(retrieval::SelectorConfig::load(dataPath(c, "selectors.json")));
    std::shared_ptr<retrieval::SearchProvider> provider;
    std::shared_ptr<retrieval::PoliteClient> client;
    retrieval::PolitenessConfig polite;
    polite.userAgent = c.userAgent;
    if (c.fixtureDir) {
        rt.fixtures = std::make_shared<retrieval::FixtureStore>(retrieval::FixtureStore::load(*c.fixtureDir));
        rt.fixtureFetcher = std::make_shared<retrieval::FixtureFetcher>(rt.fixtures);
        polite.minDelay = std::chrono::milliseconds(0);
        polite.backoffBase = std::chrono::milliseconds(0);
        client = std::make_shared<retrieval::PoliteClient>(rt.fixtureFetcher, polite);
        provider = std::make_shared<retrieval::FixtureSearchProvider>(rt.fixtures, c.searchTemplate);
        d.cacheNamespace = rt.fixtures->digest();
    } else {
        retrieval::LiveFetchConfig lf;
        lf.userAgent = c.userAgent;
        lf = retrieval::LiveFetchConfig::fromEnv(lf);
        client = std::make_shared<retrieval::PoliteClient>(std::make_shared<retrieval::LiveFetcher>(lf), polite);
        provider = std::make_shared<retrieval::LiveSearchProvider>(client, c.searchTemplate);
        d.cacheNamespace = "live";
    }
    d.clock = c.freezeClock ? retrieval::Clock([] { return 0.0; }) : retrieval::steadyClock();
    d.retriever = std::make_shared<retrieval::Retriever>(provider, client, selectors, retrieval::RetrieverConfig{},
                                                         d.clock);

    if (c.backendUrl == "mock:lexical") {
        d.nli = std::make_shared<nli::LexicalNliBackend>();
        d.consistency = std::make_shared<nli::LexicalConsistencyBackend>();
    } else if (c.backendUrl == "mock:hash") {
        d.nli = std::make_shared<nli::HashNliBackend>();
        d.consistency = std::make_shared<nli::HashConsistencyBackend>();
    } else if (text::startsWith(c.backendUrl, "mock:")) {
        throw Error("unknown mock backend '" + c.backendUrl + "' (use mock:lexical or mock:hash)");
    } else {
        auto http = std::make_shared<sidecar::HttpJsonClient>(sidecar::ClientConfig{c.backendUrl});
        d.nli = std::make_shared<sidecar::HttpNliBackend>(http);
        d.consistency = std::make_shared<sidecar::HttpConsistencyBackend>(http);
    }
    rt.slm = makeSlm(c);
    d.slm = rt.slm;
    d.splitter = std::make_shared<const nli::SentenceSplitter>(
        nli::SentenceSplitter::fromFile(dataPath(c, "abbreviations.txt")));
    d.questionPrompt = std::make_shared<const pipelines::PromptTemplate>(
        pipelines::PromptTemplate::load(pipelines::SlmTask::Question, dataPath(c, "prompts/question_gen.txt")));
    d.conv = nli::ConvScorerConfig::load(c.convWeightsPath.value_or(dataPath(c, "conv_weights.json")));
    if (c.thresholdsPath) d.thresholds = pipelines::Thresholds::load(*c.thresholdsPath);
    d.k = c.k;
    d.cache = std::make_shared<pipelines::EvidenceCache>();
    return rt;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline void writeOutput(const RunConfig& c, const std::string& content, std::ostream& out) {
    if (c.reportPath) {
        text::writeFile(*c.reportPath, content);
    } else {
        out << content;
    }
}

inline std::string renderExplanation(const pipelines::PipelineResult& r) {
    const auto& v = r.verdict;
    const auto& e = r.explanation;
    std::ostringstream os;
    char score[64];
    std::snprintf(score, sizeof score, "%.4f (threshold %.4f)", v.score, v.threshold);
    os << "Headline:  " << e.headline << "\n";
    os << "Verdict:   " << (v.verdict == BinaryLabel::Reliable ? "Reliable" : "Unreliable") << "\n";
    os << "Pipeline:  " << toString(v.pipeline) << " / " << toString(v.scorer) << "\n";
    os << "Score:     " << score << "\n";
    os << "Evidence:  " << toString(v.evidence.stage) << " for query \"" << v.evidence.query << "\"\n";
    if (e.generatedQuestion) os << "Question:  " << *e.generatedQuestion << "\n";
    if (e.questionFallbackReason) os << "Fallback:  headline used as query (" << *e.questionFallbackReason << ")\n";
    os << "Sources:\n";
    for (const auto& u : e.sourceUrls) os << "  " << u << "\n";
    return os.str();
}

inline int cmdVerify(const std::string& headline, const RunConfig& c, std::ostream& out, std::ostream& err) {
    auto rt = buildRuntime(c);
    const auto pipeline = c.pipelines.empty() ? PipelineKind::Article : c.pipelines.front();
    const auto scorer = c.scorers.empty() ? ScorerKind::SummacZS : c.scorers.front();
    try {
        auto r = pipelines::runPipeline(pipeline, headline, scorer, rt.deps, "cli");
        for (const auto& w : rt.deps.retriever->takeWarnings()) err << "warning: " << w << "\n";
        writeOutput(c, c.json ? pipelines::toJson(r).dump(2) + "\n" : renderExplanation(r), out);
        return kOk;
    } catch (const retrieval::NoEvidenceError& e) {
        for (const auto& w : rt.deps.retriever->takeWarnings()) err << "warning: " << w << "\n";
        err << "no evidence: " << e.what() << "\n";
        return kNoEvidence;
    }
}

inline std::vector<eval::Combo> combosFor(const RunConfig& c) {
    std::vector<PipelineKind> ps = c.pipelines;
    std::vector<ScorerKind> ss = c.scorers;
    if (ps.empty()) ps.assign(kAllPipelines.begin(), kAllPipelines.end());
    if (ss.empty()) ss.assign(kAllScorers.begin(), kAllScorers.end());
    std::vector<eval::Combo> out;
    for (auto p : ps)
        for (auto s : ss) out.push_back({p, s});
    return out;
}

struct EvalOutputs {
    std::string format = "json";
    std::optional<std::string> timingCsv;
    std::optional<std::string> thresholdsOut;
};

inline int cmdEval(const std::string& datasetPath, const RunConfig& c, const EvalOutputs& o, std::ostream& out,
                   std::ostream& err) {
    const auto format = eval::parseReportFormat(o.format);
    if (!format) throw Error("unknown report format '" + o.format + "'");
    const auto dataset = eval::loadEval(datasetPath);
    auto rt = buildRuntime(c);
    eval::EvalConfig ec;
    ec.calibFraction = c.calibFraction;
    ec.seed = c.seed;
    ec.workers = c.workers;
    const auto rep = eval::evaluate(dataset, combosFor(c), rt.deps, ec);
    for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
    err << "calibration split " << rep.calibrationIds.size() << ", reporting split " << rep.reportingIds.size()
        << "\n";
    writeOutput(c, eval::emitReport(eval::toReportDoc(rep), *format), out);
    if (o.timingCsv) text::writeFile(*o.timingCsv, eval::timingSamplesCsv(rep.timingSamples));
    if (o.thresholdsOut) text::writeFile(*o.thresholdsOut, rep.thresholds.toJson().dump(2) + "\n");
    return kOk;
}

/// Thresholds from the calibration split only.
inline int cmdCalibrate(const std::string& datasetPath, const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto dataset = eval::loadEval(datasetPath);
    const auto split = eval::stratifiedSplit(dataset, c.calibFraction, c.seed);
    eval::Dataset calib;
    calib.name = dataset.name + " (calibration split)";
    for (auto i : split.calibration) calib.records.push_back(dataset.records[i]);
    auto rt = buildRuntime(c);
    auto combos = combosFor(c);
    std::erase_if(combos, [](const eval::Combo& x) { return x.scorer == ScorerKind::FactCC; });
    if (combos.empty()) throw Error("FactCC uses a fixed threshold; choose a SummaC scorer to calibrate");
    const auto runs = eval::runBatch(calib, combos, rt.deps, c.workers);
    pipelines::Thresholds th = rt.deps.thresholds;
    for (const auto& run : runs) {
        std::vector<double> scores;
        std::vector<BinaryLabel> ys;
        for (std::size_t i = 0; i < calib.records.size(); ++i)
            if (run.outcomes[i].score) {
                scores.push_back(*run.outcomes[i].score);
                ys.push_back(*calib.records[i].label);
            }
        try {
            const auto r = nli::calibrateThreshold(scores, ys, 0.01, c.seed);
            th.set(run.combo.pipeline, run.combo.scorer, r.threshold);
            err << run.combo.name() << ": threshold " << r.threshold << ", calibration accuracy "
                << r.accuracyAtThreshold << "\n";
        } catch (const CalibrationError& e) {
            err << "warning: " << run.combo.name() << ": " << e.what() << "\n";
        }
    }
    writeOutput(c, th.toJson().dump(2) + "\n", out);
    return kOk;
}

inline int cmdGenerateEvalset(const std::string& truthsPath, const RunConfig& c, pipelines::SlmKind model,
                              std::ostream& out, std::ostream& err) {
    const auto table = eval::parseCsv(text::readFile(truthsPath));
    if (table.rows.empty()) throw DatasetFormatError("headline file " + truthsPath + " is empty");
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < table.rows[0].size(); ++i)
        col.emplace(text::toLowerAscii(text::trim(table.rows[0][i])), i);
    if (!col.count("headline")) throw DatasetFormatError(truthsPath + " lacks a 'headline' column");
    auto cell = [&](const eval::CsvRow& row, const char* name) {
        auto it = col.find(name);
        return it == col.end() || it->second >= row.size() ? std::string() : text::trim(row[it->second]);
    };

    const auto prompt =
        pipelines::PromptTemplate::load(pipelines::SlmTask::FakeHeadline, dataPath(c, "prompts/fake_headline.txt"));
    auto slm = makeSlm(c);
    eval::Dataset outSet;
    outSet.name = "generated";
    std::set<std::string> seen;
    std::size_t pair = 0;
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string headline = text::normalizeWhitespace(cell(row, "headline"));
        if (headline.empty()) continue;
        if (!seen.insert(text::toLowerAscii(headline)).second) {
            err << "warning: duplicate headline on line " << table.lines[r] << " skipped: " << headline << "\n";
            continue;
        }
        std::string fake;
        try {
            fake = pipelines::generateFakeHeadline(headline, *slm, model, prompt);
        } catch (const pipelines::DegenerateGeneration& e) {
            err << "warning: line " << table.lines[r] << ": " << e.what() << "; pair skipped\n";
            continue;
        }
        ++pair;
        const std::string source = cell(row, "source"), domain = cell(row, "domain");
        ClaimRecord t;
        t.id = "p" + std::to_string(pair) + "-true";
        t.text = headline;
        t.label = BinaryLabel::Reliable;
        if (!source.empty()) t.source = source;
        if (!domain.empty()) t.domainTag = domain;
        ClaimRecord f = t;
        f.id = "p" + std::to_string(pair) + "-fake";
        f.text = fake;
        f.label = BinaryLabel::Unreliable;
        f.source = std::string(toString(model));
        outSet.records.push_back(std::move(t));
        outSet.records.push_back(std::move(f));
    }
    writeOutput(c, eval::writeEvalCsv(outSet), out);
    err << outSet.records.size() << " rows written\n";
    return kOk;
}

inline int cmdBaseline(const std::string& trainPath, const std::string& testPath, const RunConfig& c,
                       const std::string& format, const std::optional<std::string>& modelOut, std::ostream& out,
                       std::ostream& err) {
    const auto fmt = eval::parseReportFormat(format);
    if (!fmt) throw Error("unknown report format '" + format + "'");
    const auto train = eval::loadLiar(trainPath);
    if (!train.warnings.empty()) err << "warning: " << train.warnings.size() << " LIAR rows skipped\n";
    const auto test = eval::loadEval(testPath);
    const auto lexicon = baselines::Lexicon::load(dataPath(c, "stopwords.txt"), dataPath(c, "lemmas.tsv"));
    baselines::LogRegConfig lr;
    lr.seed = c.seed;
    const auto bundle = eval::trainBaselines(train, lexicon, lr);
    if (modelOut) text::writeFile(*modelOut, baselines::toJson(bundle).dump() + "\n");
    const auto scores = eval::evaluateBaselines(bundle, test, lexicon);
    eval::ReportDoc doc;
    doc.title = "Baselines trained on " + train.name;
    doc.metrics = {scores.naiveBayes, scores.logisticRegression};
    doc.context = {{"train", train.name},
                   {"train_size", train.records.size()},
                   {"test", test.name},
                   {"test_size", test.records.size()},
                   {"vocabulary", bundle.tfidf.dims()}};
    writeOutput(c, eval::emitReport(doc, *fmt), out);
    return kOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Headline verification against retrieved web evidence", "veritas"};
    app.require_subcommand(1);
    CliOverrides o;

    auto common = [&o](CLI::App* sub) {
        sub->add_option("--backend-url", o.backendUrl, "NLI/SLM sidecar URL, or mock:lexical / mock:hash");
        sub->add_option("--fixtures", o.fixtureDir, "Replay recorded pages from DIR (no live network)");
        sub->add_option("--k", o.k, "Articles to fetch per query (default 3)");
        sub->add_option("--seed", o.seed, "Seed for splits and training (default 42)");
        sub->add_option("--report", o.reportPath, "Write output to PATH instead of stdout");
        sub->add_option("--data-dir", o.dataDir, "Directory holding prompts, selectors and word lists");
        sub->add_option("--config", o.configPath, "JSON config file (flags > env > file)");
        sub->add_option("--slm-script", o.slmScriptPath, "Scripted SLM responses for mock backends");
        sub->add_option("--search-template", o.searchTemplate, "Results-page URL with {query} and {num}");
        sub->add_option("--workers", o.workers, "Headlines evaluated concurrently");
        sub->add_flag("--freeze-clock", o.freezeClock, "Report zero stage timings (golden-file runs)");
    };
    auto selection = [&o](CLI::App* sub) {
        sub->add_option("--pipeline", o.pipelines, "article | qa | slm-mistral | slm-phi3 (repeatable)");
        sub->add_option("--scorer", o.scorers, "factcc | summac-zs | summac-conv (repeatable)");
        sub->add_option("--thresholds", o.thresholdsPath, "Calibrated thresholds JSON");
        sub->add_option("--conv-weights", o.convWeightsPath, "SummaC-Conv weight file");
    };

    std::string headline, dataset, truths, train, test, url, format = "json", slmModel = "mistral";
    std::optional<std::string> timingCsv, thresholdsOut, modelOut;

    auto* verify = app.add_subcommand("verify", "Verify one headline");
    verify->add_option("headline", headline, "Headline text")->required();
    verify->add_flag("--json", o.json, "Emit the structured explanation record");
    common(verify);
    selection(verify);

    auto* evalCmd = app.add_subcommand("eval", "Calibrate on a split, report metrics on the rest");
    evalCmd->add_option("dataset", dataset, "CSV with headline,label[,source,domain,id]")->required();
    evalCmd->add_option("--calib-frac", o.calibFraction, "Calibration fraction (default 0.2)");
    evalCmd->add_option("--format", format, "json | csv | markdown");
    evalCmd->add_option("--timing-csv", timingCsv, "Write (stage, seconds) samples to PATH");
    evalCmd->add_option("--thresholds-out", thresholdsOut, "Write calibrated thresholds to PATH");
    common(evalCmd);
    selection(evalCmd);

    auto* calibrate = app.add_subcommand("calibrate", "Fit SummaC thresholds on the calibration split");
    calibrate->add_option("dataset", dataset, "Evaluation CSV")->required();
    calibrate->add_option("--calib-frac", o.calibFraction, "Calibration fraction (default 0.2)");
    common(calibrate);
    selection(calibrate);

    auto* gen = app.add_subcommand("generate-evalset", "Pair each credible headline with a generated fake");
    gen->add_option("truths", truths, "CSV with a headline column")->required();
    gen->add_option("--slm", slmModel, "mistral | phi3")->check(CLI::IsMember({"mistral", "phi3"}));
    common(gen);

    auto* base = app.add_subcommand("baseline", "Train TF-IDF baselines on LIAR and score an evaluation set");
    base->add_option("--train", train, "LIAR TSV")->required();
    base->add_option("--test", test, "Evaluation CSV")->required();
    base->add_option("--format", format, "json | csv | markdown");
    base->add_option("--model-out", modelOut, "Write fitted models as JSON");
    common(base);

    auto* key = app.add_subcommand("fixture-key", "Print the fixture file stem for a URL");
    key->add_option("url", url, "Absolute URL")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*key) {
            auto u = retrieval::Url::parse(url);
            if (!u) throw Error("not an absolute http(s) URL: " + url);
            out << retrieval::fixtureKey(*u) << "\n";
            return kOk;
        }
        const RunConfig c = resolveConfig(o);
        if (*verify) return cmdVerify(headline, c, out, err);
        if (*evalCmd) return cmdEval(dataset, c, {format, timingCsv, thresholdsOut}, out, err);
        if (*calibrate) return cmdCalibrate(dataset, c, out, err);
        if (*gen)
            return cmdGenerateEvalset(truths, c,
                                      slmModel == "phi3" ? pipelines::SlmKind::Phi3 : pipelines::SlmKind::Mistral, out,
                                      err);
        if (*base) return cmdBaseline(train, test, c, format, modelOut, out, err);
    } catch (const RetryableError& e) {
        err << "error: " << e.what() << "\n";
        return kInfrastructure;
    } catch (const retrieval::SearchBlocked& e) {
        err << "error: " << e.what() << "\n";
        return kInfrastructure;
    } catch (const retrieval::NoEvidenceError& e) {
        err << "no evidence: " << e.what() << "\n";
        return kNoEvidence;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

}  // namespace veritas::cli
