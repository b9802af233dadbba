#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "support.hpp"
#include "veritas/eval/dataset.hpp"

using namespace veritas;

namespace {

struct Run {
    int rc = -1;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "veritas");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.rc = cli::runCli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

const std::string kVerstappenDir = vt::fixture("verstappen");

/// Restores an environment variable on scope exit.
class EnvGuard {
public:
    EnvGuard(const char* name, const char* value) : name_(name) {
        if (const char* old = std::getenv(name)) old_ = old;
        if (value) {
            ::setenv(name, value, 1);
        } else {
            ::unsetenv(name);
        }
    }
    ~EnvGuard() {
        if (old_) {
            ::setenv(name_, old_->c_str(), 1);
        } else {
            ::unsetenv(name_);
        }
    }

private:
    const char* name_;
    std::optional<std::string> old_;
};

/// Fixture set with one SERP per headline; the odd ones are contradicted.
std::string writeEvalWorld(const vt::TempDir& dir, int n) {
    retrieval::FixtureStore store;
    std::string csv = "id,headline,label\n";
    for (int i = 0; i < n; ++i) {
        const bool real = i % 2 == 0;
        const std::string h = real ? "Max Verstappen wins 2023 F1 world title, report " + std::to_string(i)
                                   : "Lewis Hamilton wins " + std::to_string(1990 + i) + " cycling race";
        vt::populateLayout(store, h, vt::SerpLayout::ArticlesOnly);
        csv += "h" + std::to_string(i) + ",\"" + h + "\"," + (real ? "true" : "false") + "\n";
    }
    store.save(dir.path() / "world");
    dir.write("eval.csv", csv);
    return (dir.path() / "world").string();
}

}  // namespace

TEST(Cli, VerifyHumanReadable) {
    const auto r = invoke({"verify", std::string(vt::kVerstappen), "--fixtures", kVerstappenDir});
    EXPECT_EQ(r.rc, 0) << r.err;
    EXPECT_NE(r.out.find("Verdict:"), std::string::npos);
    EXPECT_NE(r.out.find("https://www.formula1.com/"), std::string::npos);
}

TEST(Cli, VerifyJsonValidates) {
    for (const char* p : {"article", "qa", "slm-mistral", "slm-phi3"}) {
        const auto r = invoke({"verify", std::string(vt::kVerstappen), "--fixtures", kVerstappenDir, "--pipeline", p,
                            "--scorer", "summac-conv", "--json", "--freeze-clock"});
        ASSERT_EQ(r.rc, 0) << p << ": " << r.err;
        const auto j = nlohmann::json::parse(r.out);
        EXPECT_TRUE(pipelines::validateExplanationJson(j).empty()) << p;
        EXPECT_EQ(j["pipeline"], p);
        EXPECT_EQ(j["timings"]["score_seconds"], 0.0);
    }
}

TEST(Cli, VerifySlmUsesScriptedQuestion) {
    const auto r = invoke({"verify", std::string(vt::kVerstappen), "--fixtures", kVerstappenDir, "--pipeline", "slm-phi3",
                        "--json"});
    ASSERT_EQ(r.rc, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["generated_question"], "Who won the 2023 Formula 1 World Championship?");
}

TEST(Cli, ReportFileInsteadOfStdout) {
    vt::TempDir tmp;
    const auto path = tmp.file("out.json");
    const auto r = invoke({"verify", std::string(vt::kVerstappen), "--fixtures", kVerstappenDir, "--json", "--report", path});
    EXPECT_EQ(r.rc, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_TRUE(pipelines::validateExplanationJson(nlohmann::json::parse(text::readFile(path))).empty());
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(invoke({"verify", "Nothing indexed for this headline", "--fixtures", kVerstappenDir}).rc, 2);
    EXPECT_EQ(invoke({"verify", "x", "--fixtures", kVerstappenDir, "--pipeline", "bogus"}).rc, 1);
    EXPECT_EQ(invoke({"verify", "x", "--fixtures", "/nonexistent/fixtures"}).rc, 1);
    EXPECT_NE(invoke({"frobnicate"}).rc, 0);

    // explicit sidecar that is not running
    const auto down = invoke({"verify", std::string(vt::kVerstappen), "--fixtures", kVerstappenDir, "--backend-url",
                           "http://127.0.0.1:1"});
    EXPECT_EQ(down.rc, 3);
    EXPECT_NE(down.err.find("unreachable"), std::string::npos);
}

TEST(Cli, SearchBlockedIsInfrastructure) {
    vt::LocalServer srv;
    srv.server().Get("/robots.txt", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("User-agent: *\nDisallow: /search\n", "text/plain");
    });
    srv.start();
    const auto r = invoke({"verify", "anything", "--backend-url", "mock:lexical", "--search-template",
                        srv.base() + "/search?q={query}&num={num}"});
    srv.stop();
    EXPECT_EQ(r.rc, 3) << r.err;
    EXPECT_EQ(srv.hits([](const std::string& p) { return p == "/search"; }), 0u);
}

TEST(Cli, OfflineModeNeverTouchesNetwork) {
    const auto before = retrieval::LiveFetcher::requestCount().load();
    for (const char* p : {"article", "qa", "slm-mistral"})
        EXPECT_EQ(invoke({"verify", std::string(vt::kVerstappen), "--fixtures", kVerstappenDir, "--pipeline", p}).rc, 0);
    EXPECT_EQ(retrieval::LiveFetcher::requestCount().load(), before);
}

TEST(Cli, EvalReproducible) {
    vt::TempDir tmp;
    const auto world = writeEvalWorld(tmp, 12);
    std::vector<std::string> args{"eval", tmp.file("eval.csv"), "--fixtures", world, "--pipeline", "article",
                                  "--scorer", "summac-zs", "--scorer", "factcc", "--calib-frac", "0.5",
                                  "--freeze-clock", "--workers", "3"};
    for (const char* fmt : {"json", "markdown", "csv"}) {
        auto a = args;
        a.insert(a.end(), {"--format", fmt});
        const auto r1 = invoke(a), r2 = invoke(a);
        ASSERT_EQ(r1.rc, 0) << r1.err;
        EXPECT_EQ(r1.out, r2.out) << fmt;
    }
    const auto j = nlohmann::json::parse(invoke(args).out);
    EXPECT_EQ(j["metrics"].size(), 2u);
    EXPECT_EQ(j["metrics"][0]["model"], "article+summac-zs");
    EXPECT_FALSE(j["agreement"].is_null());

    auto withOut = args;
    withOut.insert(withOut.end(), {"--thresholds-out", tmp.file("th.json"), "--timing-csv", tmp.file("t.csv")});
    ASSERT_EQ(invoke(withOut).rc, 0);
    const auto th = pipelines::Thresholds::load(tmp.file("th.json"));
    EXPECT_TRUE(th.calibrated(PipelineKind::Article, ScorerKind::SummacZS));
    EXPECT_EQ(text::readFile(tmp.file("t.csv")).rfind("stage,seconds\n", 0), 0u);
}

TEST(Cli, CalibrateWritesThresholds) {
    vt::TempDir tmp;
    const auto world = writeEvalWorld(tmp, 10);
    const auto r = invoke({"calibrate", tmp.file("eval.csv"), "--fixtures", world, "--pipeline", "article", "--scorer",
                        "summac-zs", "--calib-frac", "0.5"});
    ASSERT_EQ(r.rc, 0) << r.err;
    const auto th = pipelines::Thresholds::fromJson(nlohmann::json::parse(r.out));
    EXPECT_TRUE(th.calibrated(PipelineKind::Article, ScorerKind::SummacZS));
    EXPECT_EQ(invoke({"calibrate", tmp.file("eval.csv"), "--fixtures", world, "--scorer", "factcc"}).rc, 1);
}

TEST(Cli, GenerateEvalset) {
    vt::TempDir tmp;
    tmp.write("truths.csv", "headline,source\n" + std::string(vt::kVerstappen) + ",wire\n" +
                                std::string(vt::kVerstappen) + ",dup\n");
    const auto r = invoke({"generate-evalset", tmp.file("truths.csv"), "--fixtures", kVerstappenDir, "--slm", "mistral"});
    ASSERT_EQ(r.rc, 0) << r.err;
    const auto d = eval::parseEvalCsv(r.out);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d.records[0].id, "p1-true");
    EXPECT_EQ(d.records[0].label, BinaryLabel::Reliable);
    EXPECT_EQ(d.records[0].source, "wire");
    EXPECT_EQ(d.records[1].text, "Max Verstappen wins 2013 F1 world title");
    EXPECT_EQ(d.records[1].label, BinaryLabel::Unreliable);
    EXPECT_EQ(d.records[1].source, "mistral");
    EXPECT_NE(r.err.find("duplicate headline"), std::string::npos);

    const auto phi = invoke({"generate-evalset", tmp.file("truths.csv"), "--fixtures", kVerstappenDir, "--slm", "phi3"});
    ASSERT_EQ(phi.rc, 0);
    EXPECT_EQ(eval::parseEvalCsv(phi.out).records[1].text, "Lewis Hamilton wins 2023 F1 world title");
}

TEST(Cli, Baseline) {
    vt::TempDir tmp;
    std::string liar;
    for (int i = 0; i < 10; ++i)
        liar += std::to_string(i) + (i % 2 ? "\tpants-fire\tAliens secretly control the weather\n"
                                           : "\ttrue\tSenate approves the annual budget deal\n");
    tmp.write("train.tsv", liar);
    tmp.write("test.csv", "headline,label\nSenate approves budget,true\nAliens control weather,false\n");
    const auto r = invoke({"baseline", "--train", tmp.file("train.tsv"), "--test", tmp.file("test.csv"), "--model-out",
                        tmp.file("model.json")});
    ASSERT_EQ(r.rc, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["metrics"][0]["model"], "naive-bayes");
    EXPECT_EQ(j["metrics"][0]["accuracy"], 1.0);
    EXPECT_EQ(j["context"]["train_size"], 10);
    EXPECT_TRUE(std::filesystem::exists(tmp.file("model.json")));
}

TEST(Cli, FixtureKey) {
    const auto r = invoke({"fixture-key", "https://www.espn.com/f1/story/verstappen-third-title"});
    EXPECT_EQ(r.rc, 0);
    EXPECT_EQ(r.out, retrieval::fixtureKey(*retrieval::Url::parse("https://www.espn.com/f1/story/verstappen-third-title")) + "\n");
    EXPECT_EQ(invoke({"fixture-key", "not a url"}).rc, 1);
}

TEST(Config, Precedence) {
    vt::TempDir tmp;
    const auto file = tmp.write("cfg.json", R"({"k": 5, "backend_url": "mock:hash", "seed": 7, "workers": 2})");
    EnvGuard env("VERITAS_BACKEND_URL", nullptr);
    cli::CliOverrides o;
    o.configPath = file;
    auto c = cli::resolveConfig(o);
    EXPECT_EQ(c.k, 5);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.backendUrl, "mock:hash");
    {
        EnvGuard e("VERITAS_BACKEND_URL", "mock:lexical");
        EXPECT_EQ(cli::resolveConfig(o).backendUrl, "mock:lexical");
        o.backendUrl = "http://127.0.0.1:9";
        o.k = 2;
        c = cli::resolveConfig(o);
        EXPECT_EQ(c.backendUrl, "http://127.0.0.1:9");
        EXPECT_EQ(c.k, 2);
    }
    cli::CliOverrides bare;
    EXPECT_EQ(cli::resolveConfig(bare).backendUrl, cli::kDefaultBackendUrl);
    bare.fixtureDir = kVerstappenDir;
    EXPECT_EQ(cli::resolveConfig(bare).backendUrl, "mock:lexical");
    bare.k = 0;
    EXPECT_THROW(cli::resolveConfig(bare), Error);
    tmp.write("bad.json", "[1,2]");
    cli::CliOverrides bad;
    bad.configPath = tmp.file("bad.json");
    EXPECT_THROW(cli::resolveConfig(bad), Error);
}
