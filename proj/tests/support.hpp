#pragma once

// Helpers shared by the unit suites and the acceptance binary. No gtest here.

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <httplib.h>

#include "veritas/cli/app.hpp"

namespace vt {

using namespace veritas;

inline const std::string kFixtureRoot = VERITAS_FIXTURES;
inline const std::string kDataDir = VERITAS_DATA_DIR;
inline const std::string kVerstappen = "Max Verstappen wins 2023 F1 world title";

inline std::string fixture(const std::string& rel) { return kFixtureRoot + "/" + rel; }
inline std::string dataFile(const std::string& rel) { return kDataDir + "/" + rel; }

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("veritas-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string write(const std::string& name, std::string_view content) const {
        const auto p = file(name);
        std::filesystem::create_directories(std::filesystem::path(p).parent_path());
        text::writeFile(p, content);
        return p;
    }

private:
    std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Synthetic results pages
// ---------------------------------------------------------------------------

struct SerpSpec {
    std::optional<std::string> quickAnswer;
    std::vector<std::pair<std::string, std::string>> paa;  // question, answer
    std::vector<std::string> links;
};

inline std::string serpHtml(const SerpSpec& s) {
    std::string h = "<html><body><div id=\"search\">";
    if (s.quickAnswer) h += "<div class=\"Z0LcW\">" + *s.quickAnswer + "</div>";
    if (!s.paa.empty()) {
        h += "<div class=\"related-questions\">";
        for (const auto& [q, a] : s.paa)
            h += "<div class=\"related-question-pair\"><div class=\"JlqpRe\">" + q + "</div><div class=\"wDYxhc\">" + a +
                 "</div></div>";
        h += "</div>";
    }
    for (const auto& l : s.links) h += "<div class=\"g\"><div class=\"yuRUbf\"><a href=\"" + l + "\"><h3>" + l + "</h3></a></div></div>";
    return h + "</div></body></html>";
}

inline std::string articleHtml(const std::string& heading, const std::vector<std::string>& paragraphs) {
    std::string h = "<html><head><title>t</title></head><body><nav><p>Home News Sport Weather and more links</p></nav>"
                    "<article><h1>" + heading + "</h1>";
    for (const auto& p : paragraphs) h += "<p>" + p + "</p>";
    return h + "</article><footer><p>Copyright notice for this example site here</p></footer></body></html>";
}

/// Pipeline dependencies over an in-memory fixture store.
struct MemoryWorld {
    std::shared_ptr<retrieval::FixtureStore> store = std::make_shared<retrieval::FixtureStore>();
    std::shared_ptr<retrieval::FixtureFetcher> fetcher;
    std::shared_ptr<retrieval::PoliteClient> client;
    std::shared_ptr<retrieval::Retriever> retriever;

    void build(int workers = 4) {
        fetcher = std::make_shared<retrieval::FixtureFetcher>(store);
        retrieval::PolitenessConfig pc;
        pc.minDelay = std::chrono::milliseconds(0);
        pc.backoffBase = std::chrono::milliseconds(0);
        client = std::make_shared<retrieval::PoliteClient>(fetcher, pc);
        auto selectors = std::make_shared<const retrieval::SelectorConfig>(
            retrieval::SelectorConfig::load(dataFile("selectors.json")));
        retriever = std::make_shared<retrieval::Retriever>(
            std::make_shared<retrieval::FixtureSearchProvider>(store), client, selectors,
            retrieval::RetrieverConfig{workers}, [] { return 0.0; });
    }

    pipelines::PipelineDeps deps(std::shared_ptr<nli::NliBackend> nliBackend = std::make_shared<nli::LexicalNliBackend>(),
                                 std::shared_ptr<nli::ConsistencyBackend> cons =
                                     std::make_shared<nli::LexicalConsistencyBackend>(),
                                 std::shared_ptr<pipelines::SlmBackend> slm =
                                     std::make_shared<pipelines::ScriptedSlmBackend>()) {
        if (!retriever) build();
        pipelines::PipelineDeps d;
        d.retriever = retriever;
        d.nli = std::move(nliBackend);
        d.consistency = std::move(cons);
        d.slm = std::move(slm);
        d.splitter = std::make_shared<const nli::SentenceSplitter>(
            nli::SentenceSplitter::fromFile(dataFile("abbreviations.txt")));
        d.questionPrompt = std::make_shared<const pipelines::PromptTemplate>(
            pipelines::PromptTemplate::load(pipelines::SlmTask::Question, dataFile("prompts/question_gen.txt")));
        d.clock = [] { return 0.0; };
        d.cache = std::make_shared<pipelines::EvidenceCache>();
        return d;
    }
};

/// Three SERP layouts for one query: quick answer, PAA only, organic links only.
enum class SerpLayout { Quick, PaaOnly, ArticlesOnly };

inline void populateLayout(retrieval::FixtureStore& store, const std::string& query, SerpLayout layout) {
    SerpSpec s;
    s.links = {"https://news.example.org/story", "https://wire.example.net/report"};
    if (layout == SerpLayout::Quick) s.quickAnswer = "Max Verstappen";
    if (layout != SerpLayout::ArticlesOnly)
        s.paa = {{"Who won the 2023 F1 title?", "Max Verstappen won the 2023 Formula One title with Red Bull."},
                 {"How many races did Verstappen win in 2023?", "He won 19 of 22 Grands Prix in 2023."}};
    store.addSerp(query, serpHtml(s));
    store.addPage("https://news.example.org/story",
                  articleHtml("Verstappen takes 2023 crown",
                              {"Max Verstappen secured the 2023 Formula One world title in Qatar on Saturday.",
                               "The Red Bull driver won a record number of races during the season."}));
    store.addPage("https://wire.example.net/report",
                  articleHtml("Champion again", {"Verstappen claimed his third consecutive world title in 2023."}));
}

// ---------------------------------------------------------------------------
// Local HTTP server with a request log
// ---------------------------------------------------------------------------

class LocalServer {
public:
    LocalServer() {
        server_.set_logger([this](const httplib::Request& req, const httplib::Response&) {
            std::lock_guard lock(mu_);
            log_.push_back(req.path);
        });
    }
    ~LocalServer() { stop(); }

    httplib::Server& server() { return server_; }

    void start() {
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    void stop() {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }

    int port() const { return port_; }
    std::string base() const { return "http://127.0.0.1:" + std::to_string(port_); }
    // Same server under a second host name; result links pointing at the
    // search host itself are dropped by the extractor.
    std::string searchBase() const { return "http://localhost:" + std::to_string(port_); }

    std::vector<std::string> log() const {
        std::lock_guard lock(mu_);
        return log_;
    }

    std::size_t hits(const std::function<bool(const std::string&)>& pred) const {
        std::size_t n = 0;
        for (const auto& p : log()) n += pred(p);
        return n;
    }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    mutable std::mutex mu_;
    std::vector<std::string> log_;
};

/// A small crawlable site: robots.txt disallows /private/, a search page
/// links to allowed and disallowed articles, and /go redirects into /private/.
inline void serveRobotsSite(LocalServer& s) {
    auto& srv = s.server();
    srv.Get("/robots.txt", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("User-agent: *\nDisallow: /private/\nAllow: /\n", "text/plain");
    });
    srv.Get("/search", [&s](const httplib::Request&, httplib::Response& res) {
        SerpSpec spec;
        spec.links = {s.base() + "/private/leak", s.base() + "/news/a", s.base() + "/go", s.base() + "/news/b"};
        res.set_content(serpHtml(spec), "text/html");
    });
    srv.Get(R"(/news/(\w+))", [](const httplib::Request& req, httplib::Response& res) {
        res.set_content(articleHtml("Local story " + std::string(req.matches[1]),
                                    {"Max Verstappen won the 2023 Formula One world title for Red Bull."}),
                        "text/html");
    });
    srv.Get("/go", [](const httplib::Request&, httplib::Response& res) {
        res.status = 302;
        res.set_header("Location", "/private/redirected");
    });
    srv.Get(R"(/private/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(articleHtml("Secret", {"This page must never be fetched by a polite crawler."}), "text/html");
    });
}

inline bool isPrivatePath(const std::string& p) { return p.rfind("/private/", 0) == 0; }

}  // namespace vt
