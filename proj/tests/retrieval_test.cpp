#include <gtest/gtest.h>

#include "support.hpp"

using namespace veritas;
using namespace veritas::retrieval;

// ---------------------------------------------------------------------------
// URLs
// ---------------------------------------------------------------------------

TEST(Url, Parse) {
    auto u = Url::parse("HTTPS://Example.COM:8443/a/b?x=1#frag");
    ASSERT_TRUE(u);
    EXPECT_EQ(u->scheme, "https");
    EXPECT_EQ(u->host, "example.com");
    EXPECT_EQ(u->port, 8443);
    EXPECT_EQ(u->target, "/a/b?x=1");
    EXPECT_EQ(u->path(), "/a/b");
    EXPECT_EQ(u->str(), "https://example.com:8443/a/b?x=1");
    EXPECT_EQ(Url::parse("http://example.com")->target, "/");
    EXPECT_EQ(Url::parse("http://example.com:80/x")->str(), "http://example.com/x");
    EXPECT_FALSE(Url::parse("ftp://example.com/"));
    EXPECT_FALSE(Url::parse("example.com/path"));
    EXPECT_FALSE(Url::parse("http://:80/"));
    EXPECT_FALSE(Url::parse("http://host:99999/"));
}

TEST(Url, Resolve) {
    const auto base = *Url::parse("https://news.example.org/sport/f1/story.html?x=1");
    EXPECT_EQ(resolveHref(base, "other.html")->str(), "https://news.example.org/sport/f1/other.html");
    EXPECT_EQ(resolveHref(base, "/root")->str(), "https://news.example.org/root");
    EXPECT_EQ(resolveHref(base, "//cdn.example.net/a")->str(), "https://cdn.example.net/a");
    EXPECT_EQ(resolveHref(base, "http://x.org/y")->str(), "http://x.org/y");
    EXPECT_FALSE(resolveHref(base, "mailto:a@b.c"));
    EXPECT_FALSE(resolveHref(base, "javascript:void(0)"));
    EXPECT_FALSE(resolveHref(base, "#top"));
}

TEST(Url, PercentCoding) {
    EXPECT_EQ(percentEncode("Who won? F1 2023"), "Who+won%3F+F1+2023");
    EXPECT_EQ(percentDecode("Who+won%3F+F1+2023"), "Who won? F1 2023");
    EXPECT_EQ(percentDecode("bad%zz"), "bad%zz");
}

// ---------------------------------------------------------------------------
// HTML
// ---------------------------------------------------------------------------

TEST(Html, ParseAndSelect) {
    const auto doc = html::Document::parse(
        "<div id=main class='a b'><p>One <b>bold</b></p><p>Two<p>Three</div><span class=b>x</span>");
    auto ps = html::Selector::parse("#main p").selectAll(doc.root());
    ASSERT_EQ(ps.size(), 3u);
    EXPECT_EQ(html::visibleText(*ps[0]), "One bold");
    EXPECT_EQ(html::visibleText(*ps[2]), "Three");
    EXPECT_EQ(html::Selector::parse(".b").selectAll(doc.root()).size(), 2u);
    EXPECT_EQ(html::Selector::parse("div.a.b > p").selectAll(doc.root()).size(), 3u);
    EXPECT_EQ(html::Selector::parse("span, p").selectAll(doc.root()).size(), 4u);
}

TEST(Html, Attributes) {
    const auto doc = html::Document::parse("<a href=\"/x\" rel=nofollow>l</a><a data-k='v w'>m</a><a>n</a>");
    EXPECT_EQ(html::Selector::parse("a[href]").selectAll(doc.root()).size(), 1u);
    EXPECT_EQ(html::Selector::parse("a[rel=nofollow]").selectAll(doc.root()).size(), 1u);
    EXPECT_EQ(html::Selector::parse("a[data-k~=w]").selectAll(doc.root()).size(), 1u);
    EXPECT_EQ(html::Selector::parse("a[href^='/']").selectAll(doc.root()).size(), 1u);
}

TEST(Html, Entities) {
    EXPECT_EQ(html::decodeEntities("a &amp; b &lt;c&gt; &#8364; &#x41; &nbsp;"), "a & b <c> \xE2\x82\xAC A \xC2\xA0");
    EXPECT_EQ(html::decodeEntities("&unknown; &"), "&unknown; &");
}

TEST(Html, HiddenTextSkipped) {
    const auto doc = html::Document::parse(
        "<div><p>Seen</p><p style='display: none'>Gone</p><script>var x = '<p>no</p>';</script>"
        "<noscript>nope</noscript><p hidden>hid</p><p aria-hidden=true>aria</p></div>");
    EXPECT_EQ(html::visibleText(doc.root()), "Seen");
}

TEST(Html, BadSelector) { EXPECT_THROW(html::Selector::parse("div >"), html::SelectorError); }

// ---------------------------------------------------------------------------
// Robots
// ---------------------------------------------------------------------------

TEST(Robots, GroupsAndPrecedence) {
    const auto p = parseRobots(
        "# comment\n"
        "User-agent: *\nDisallow: /private/\nAllow: /private/open\n\n"
        "User-agent: veritas-bot\nUser-agent: other\nDisallow: /bots-only\nDisallow:\n");
    EXPECT_TRUE(isAllowed(p, "/private/open/x", "somebot"));
    EXPECT_FALSE(isAllowed(p, "/private/x", "somebot"));
    // The specific group replaces the "*" group.
    EXPECT_TRUE(isAllowed(p, "/private/x", "veritas-bot/1.0"));
    EXPECT_FALSE(isAllowed(p, "/bots-only/a", "Veritas-Bot/2"));
    EXPECT_TRUE(isAllowed(p, "/robots.txt", "somebot"));
}

TEST(Robots, Wildcards) {
    const auto p = parseRobots("User-agent: *\nDisallow: /*.pdf$\nDisallow: /search*q=\nAllow: /search$\n");
    EXPECT_FALSE(isAllowed(p, "/docs/a.pdf", "x"));
    EXPECT_TRUE(isAllowed(p, "/docs/a.pdf?v=1", "x"));
    EXPECT_FALSE(isAllowed(p, "/search?q=verstappen", "x"));
    EXPECT_TRUE(isAllowed(p, "/search", "x"));
}

TEST(Robots, TieGoesToAllow) {
    const auto p = parseRobots("User-agent: *\nDisallow: /page\nAllow: /page\n");
    EXPECT_TRUE(isAllowed(p, "/page", "x"));
}

TEST(Robots, EmptyAndMalformed) {
    EXPECT_TRUE(isAllowed(parseRobots(""), "/anything", "x"));
    EXPECT_TRUE(isAllowed(parseRobots("Disallow: /\nnonsense line\n"), "/a", "x"));
    EXPECT_FALSE(isAllowed(parseRobots("User-agent: *\nDisallow: /\n"), "/a", "x"));
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

namespace {
const SelectorConfig& selectors() {
    static const auto s = SelectorConfig::load(vt::dataFile("selectors.json"));
    return s;
}
}  // namespace

TEST(Extract, QuickAnswer) {
    EXPECT_EQ(extractQuickAnswer(vt::serpHtml({"Max Verstappen", {}, {}}), selectors()), "Max Verstappen");
    EXPECT_FALSE(extractQuickAnswer(vt::serpHtml({std::nullopt, {}, {"https://a.org/"}}), selectors()));
    EXPECT_FALSE(extractQuickAnswer("<div style='display:none'><div class='Z0LcW'>Hidden</div></div>", selectors()));
    EXPECT_EQ(extractQuickAnswer("<div class='hgKElc'>Fallback selector</div>", selectors()), "Fallback selector");
}

TEST(Extract, PeopleAlsoAsked) {
    const std::string body =
        "<div class='related-question-pair'><div class='JlqpRe'>Q1?</div><div class='wDYxhc'>A1.</div>"
        "<div class='yuRUbf'><a href='https://src.example/1'>s</a></div></div>"
        "<div class='related-question-pair'><div class='JlqpRe'>Q2?</div></div>"
        "<div class='related-question-pair'><div class='JlqpRe'>Q3?</div><div class='wDYxhc'>A3.</div></div>";
    const auto e = extractPeopleAlsoAsked(body, selectors());
    ASSERT_EQ(e.size(), 2u);
    EXPECT_EQ(e[0], (PaaEntry{"Q1?", "A1.", "https://src.example/1"}));
    EXPECT_EQ(e[1].sourceUrl, "");
}

TEST(Extract, ArticleDropsBoilerplate) {
    const auto a = extractArticle(text::readFile(vt::fixture("verstappen/pages/formula1.html")), selectors());
    ASSERT_FALSE(a.headings.empty());
    EXPECT_EQ(a.headings[0], "Max Verstappen crowned Formula One world champion");
    for (const auto& p : a.paragraphs) {
        EXPECT_EQ(p.find("cookie"), std::string::npos) << p;
        EXPECT_EQ(p.find("Subscribe"), std::string::npos) << p;
    }
    EXPECT_FALSE(a.paragraphs.empty());
}

TEST(Extract, ShortParagraphsDropped) {
    const auto a = extractArticle("<h1>Title</h1><p>Too short.</p><p>This paragraph has enough words in it.</p>",
                                  selectors());
    EXPECT_EQ(a.paragraphs, (std::vector<std::string>{"This paragraph has enough words in it."}));
}

TEST(Extract, SerpLinks) {
    const auto serpUrl = *Url::parse("https://www.google.com/search?q=x");
    const std::string body =
        "<div class='g'><a href='/url?q=https%3A%2F%2Fa.example%2Fstory&sa=U'><h3>A</h3></a></div>"
        "<div class='g'><a href='https://www.google.com/preferences'>self</a></div>"
        "<div class='g'><a href='https://b.example/x'><h3>B</h3></a></div>"
        "<div class='g'><a href='https://a.example/story'>dup</a></div>"
        "<div class='g'><span>no link</span></div>";
    const auto hits = parseSerpLinks(body, selectors(), serpUrl);
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(hits[0], (SearchHit{1, "https://a.example/story", "A"}));
    EXPECT_EQ(hits[1], (SearchHit{2, "https://b.example/x", "B"}));
}

// ---------------------------------------------------------------------------
// Fixture store
// ---------------------------------------------------------------------------

TEST(Fixtures, KeyAndLookup) {
    FixtureStore s;
    s.addPage("https://a.example/x", "body");
    s.addSerp("  Who   WON ", "serp");
    EXPECT_EQ(s.page(*Url::parse("https://A.example/x#frag")), "body");
    EXPECT_FALSE(s.page(*Url::parse("https://a.example/y")));
    EXPECT_EQ(s.serp("who won"), "serp");
    EXPECT_EQ(normalizeQuery(" Who  Won?\t"), "who won?");
    EXPECT_EQ(fixtureKey(*Url::parse("https://a.example/x")), text::hex64(text::fnv1a64("https://a.example/x")));
}

TEST(Fixtures, SaveLoadRoundTrip) {
    vt::TempDir dir;
    FixtureStore s;
    s.addPage("https://a.example/x", "<p>page</p>");
    s.addSerp("query one", "<html>serp</html>");
    s.save(dir.path());
    const auto loaded = FixtureStore::load(dir.path());
    EXPECT_EQ(loaded.page(*Url::parse("https://a.example/x")), "<p>page</p>");
    EXPECT_EQ(loaded.serp("Query One"), "<html>serp</html>");
    EXPECT_EQ(loaded.digest(), FixtureStore::load(dir.path()).digest());
}

TEST(Fixtures, MissingIndexIsError) {
    vt::TempDir dir;
    EXPECT_THROW(FixtureStore::load(dir.path()), Error);
    dir.write("index.json", "{\"version\": 7}");
    EXPECT_THROW(FixtureStore::load(dir.path()), Error);
}

TEST(Fixtures, VerstappenPagesMap) {
    const auto s = FixtureStore::load(vt::fixture("verstappen"));
    EXPECT_TRUE(s.serp(vt::kVerstappen));
    EXPECT_TRUE(s.page(*Url::parse("https://www.formula1.com/robots.txt")));
}

// ---------------------------------------------------------------------------
// Polite client
// ---------------------------------------------------------------------------

namespace {

/// Fetcher with programmable responses and a request log.
class ScriptedFetcher : public Fetcher {
public:
    std::map<std::string, std::vector<FetchResult>> responses;  // url -> successive results (last repeats)

    FetchResult get(const Url& url) override {
        std::lock_guard lock(mu);
        log.push_back(url.str());
        auto it = responses.find(url.str());
        if (it == responses.end()) return {404, {}, {}, {}};
        auto& seq = it->second;
        const std::size_t n = served[url.str()]++;
        return seq[std::min(n, seq.size() - 1)];
    }

    std::size_t count(const std::string& url) {
        std::lock_guard lock(mu);
        return static_cast<std::size_t>(std::count(log.begin(), log.end(), url));
    }

    std::mutex mu;
    std::vector<std::string> log;
    std::map<std::string, std::size_t> served;
};

PolitenessConfig fastPolite() {
    PolitenessConfig c;
    c.minDelay = std::chrono::milliseconds(0);
    c.backoffBase = std::chrono::milliseconds(0);
    return c;
}

}  // namespace

TEST(Polite, RobotsFetchedOncePerHost) {
    auto f = std::make_shared<ScriptedFetcher>();
    f->responses["https://h.example/robots.txt"] = {{200, "User-agent: *\nDisallow: /no/\n", {}, {}}};
    f->responses["https://h.example/a"] = {{200, "A", {}, {}}};
    f->responses["https://h.example/b"] = {{200, "B", {}, {}}};
    PoliteClient c(f, fastPolite());
    EXPECT_EQ(c.get(*Url::parse("https://h.example/a")).body, "A");
    EXPECT_EQ(c.get(*Url::parse("https://h.example/b")).body, "B");
    EXPECT_THROW(c.get(*Url::parse("https://h.example/no/x")), RobotsDisallowed);
    EXPECT_EQ(f->count("https://h.example/robots.txt"), 1u);
    EXPECT_EQ(f->count("https://h.example/no/x"), 0u);
}

TEST(Polite, RedirectHopsAreChecked) {
    auto f = std::make_shared<ScriptedFetcher>();
    f->responses["https://h.example/robots.txt"] = {{200, "User-agent: *\nDisallow: /secret\n", {}, {}}};
    f->responses["https://h.example/go"] = {{301, {}, "/secret/page", {}}};
    f->responses["https://h.example/ok"] = {{302, {}, "https://other.example/final", {}}};
    f->responses["https://other.example/final"] = {{200, "final", {}, {}}};
    PoliteClient c(f, fastPolite());
    EXPECT_THROW(c.get(*Url::parse("https://h.example/go")), RobotsDisallowed);
    EXPECT_EQ(f->count("https://h.example/secret/page"), 0u);
    EXPECT_EQ(c.get(*Url::parse("https://h.example/ok")).body, "final");
    EXPECT_EQ(f->count("https://other.example/robots.txt"), 1u);
}

TEST(Polite, RedirectLoopStops) {
    auto f = std::make_shared<ScriptedFetcher>();
    f->responses["https://h.example/loop"] = {{302, {}, "/loop", {}}};
    PoliteClient c(f, fastPolite());
    EXPECT_THROW(c.get(*Url::parse("https://h.example/loop")), FetchError);
}

TEST(Polite, RetriesServerErrorsThenGivesUp) {
    auto f = std::make_shared<ScriptedFetcher>();
    f->responses["https://h.example/flaky"] = {{503, {}, {}, {}}, {200, "ok", {}, {}}};
    f->responses["https://h.example/down"] = {{500, {}, {}, {}}};
    PoliteClient c(f, fastPolite());
    EXPECT_EQ(c.get(*Url::parse("https://h.example/flaky")).body, "ok");
    EXPECT_THROW(c.get(*Url::parse("https://h.example/down")), FetchError);
    EXPECT_EQ(f->count("https://h.example/down"), 3u);  // 1 + 2 retries
}

TEST(Polite, RobotsUnavailableWarnsAndAllows) {
    auto f = std::make_shared<ScriptedFetcher>();
    f->responses["https://h.example/robots.txt"] = {{503, {}, {}, {}}};
    f->responses["https://h.example/a"] = {{200, "A", {}, {}}};
    PoliteClient c(f, fastPolite());
    EXPECT_EQ(c.get(*Url::parse("https://h.example/a")).body, "A");
    EXPECT_TRUE(c.robotsFor(*Url::parse("https://h.example/")).warning);
    auto g = std::make_shared<ScriptedFetcher>();
    PoliteClient c2(g, fastPolite());
    EXPECT_TRUE(c2.allowed(*Url::parse("https://z.example/x")));  // 404 robots: allow, no warning
    EXPECT_FALSE(c2.robotsFor(*Url::parse("https://z.example/")).warning);
}

TEST(Polite, MinDelayBetweenSameHostRequests) {
    auto f = std::make_shared<ScriptedFetcher>();
    for (int i = 0; i < 3; ++i) f->responses["https://h.example/" + std::to_string(i)] = {{200, "x", {}, {}}};
    PolitenessConfig pc = fastPolite();
    pc.minDelay = std::chrono::milliseconds(30);
    PoliteClient c(f, pc);
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 3; ++i) c.get(*Url::parse("https://h.example/" + std::to_string(i)));
    // robots.txt + 3 pages = 4 requests, so at least 3 gaps.
    EXPECT_GE(std::chrono::steady_clock::now() - t0, std::chrono::milliseconds(90));
}

// ---------------------------------------------------------------------------
// Evidence chain
// ---------------------------------------------------------------------------

class FallbackChain : public ::testing::TestWithParam<std::pair<vt::SerpLayout, EvidenceStage>> {};

TEST_P(FallbackChain, StageMatchesLayout) {
    const std::string q = "who won the 2023 title";
    vt::MemoryWorld w;
    vt::populateLayout(*w.store, q, GetParam().first);
    w.build();
    const auto b = w.retriever->retrieveEvidence(q, RetrievalStrategy::QuickAnswerChain, 3);
    EXPECT_EQ(b.stage, GetParam().second);
    EXPECT_NO_THROW(b.validate());
    const auto again = w.retriever->retrieveEvidence(q, RetrievalStrategy::QuickAnswerChain, 3);
    EXPECT_EQ(b.passages, again.passages);
}

INSTANTIATE_TEST_SUITE_P(Layouts, FallbackChain,
                         ::testing::Values(std::pair{vt::SerpLayout::Quick, EvidenceStage::QuickAnswer},
                                           std::pair{vt::SerpLayout::PaaOnly, EvidenceStage::PeopleAlsoAsked},
                                           std::pair{vt::SerpLayout::ArticlesOnly, EvidenceStage::Articles}));

TEST(Evidence, QuickAnswerPassageIsTheAnswer) {
    vt::MemoryWorld w;
    vt::populateLayout(*w.store, "q", vt::SerpLayout::Quick);
    w.build();
    const auto b = w.retriever->retrieveEvidence("q", RetrievalStrategy::QuickAnswerChain, 3);
    ASSERT_EQ(b.passages.size(), 1u);
    EXPECT_EQ(b.passages[0].text, "Max Verstappen");
    EXPECT_TRUE(text::startsWith(b.passages[0].sourceUrl, "https://www.google.com/search?q=q"));
}

TEST(Evidence, PaaPassagesJoinQuestionAndAnswer) {
    vt::MemoryWorld w;
    vt::populateLayout(*w.store, "q", vt::SerpLayout::PaaOnly);
    w.build();
    const auto b = w.retriever->retrieveEvidence("q", RetrievalStrategy::QuickAnswerChain, 3);
    ASSERT_EQ(b.passages.size(), 2u);
    EXPECT_EQ(b.passages[0].text, "Who won the 2023 F1 title? Max Verstappen won the 2023 Formula One title with Red Bull.");
}

TEST(Evidence, ArticlesOnlyIgnoresQuickAnswer) {
    vt::MemoryWorld w;
    vt::populateLayout(*w.store, "q", vt::SerpLayout::Quick);
    w.build();
    const auto b = w.retriever->retrieveEvidence("q", RetrievalStrategy::ArticlesOnly, 3);
    EXPECT_EQ(b.stage, EvidenceStage::Articles);
    ASSERT_EQ(b.passages.size(), 2u);
    EXPECT_EQ(b.passages[0].sourceUrl, "https://news.example.org/story");
    EXPECT_EQ(b.passages[0].text.substr(0, 27), "Verstappen takes 2023 crown");
}

TEST(Evidence, KLimitsArticles) {
    vt::MemoryWorld w;
    vt::populateLayout(*w.store, "q", vt::SerpLayout::ArticlesOnly);
    w.build();
    EXPECT_EQ(w.retriever->retrieveEvidence("q", RetrievalStrategy::ArticlesOnly, 1).passages.size(), 1u);
    EXPECT_EQ(w.retriever->search("q", 1).size(), 1u);
    EXPECT_THROW(w.retriever->search("q", 0), Error);
}

TEST(Evidence, NoEvidenceListsAttemptedStages) {
    vt::MemoryWorld w;
    w.build();
    try {
        w.retriever->retrieveEvidence("unknown query", RetrievalStrategy::QuickAnswerChain, 3);
        FAIL() << "expected NoEvidenceError";
    } catch (const NoEvidenceError& e) {
        EXPECT_EQ(e.attempted(), (std::vector<EvidenceStage>{EvidenceStage::QuickAnswer, EvidenceStage::PeopleAlsoAsked,
                                                             EvidenceStage::Articles}));
    }
    EXPECT_THROW(w.retriever->retrieveEvidence("unknown", RetrievalStrategy::ArticlesOnly, 3), NoEvidenceError);
}

TEST(Evidence, UnfetchablePagesAreSkippedWithWarning) {
    vt::MemoryWorld w;
    vt::SerpSpec s;
    s.links = {"https://gone.example/a", "https://ok.example/b"};
    w.store->addSerp("q", vt::serpHtml(s));
    w.store->addPage("https://ok.example/b", vt::articleHtml("Fine", {"This article body has plenty of words."}));
    w.build();
    const auto b = w.retriever->retrieveEvidence("q", RetrievalStrategy::ArticlesOnly, 3);
    ASSERT_EQ(b.passages.size(), 1u);
    EXPECT_EQ(b.passages[0].sourceUrl, "https://ok.example/b");
    EXPECT_FALSE(w.retriever->takeWarnings().empty());
}

TEST(Evidence, VerstappenFixtureSkipsDisallowedHost) {
    const auto store = std::make_shared<FixtureStore>(FixtureStore::load(vt::fixture("verstappen")));
    auto fetcher = std::make_shared<FixtureFetcher>(store);
    auto client = std::make_shared<PoliteClient>(fetcher, fastPolite());
    Retriever r(std::make_shared<FixtureSearchProvider>(store), client,
                std::make_shared<const SelectorConfig>(selectors()));
    const auto b = r.retrieveEvidence(vt::kVerstappen, RetrievalStrategy::ArticlesOnly, 3);
    EXPECT_EQ(b.stage, EvidenceStage::Articles);
    for (const auto& url : fetcher->requestLog()) EXPECT_EQ(url.find("/private/"), std::string::npos) << url;
    bool warned = false;
    for (const auto& wmsg : r.takeWarnings()) warned |= wmsg.find("robots.txt disallows") != std::string::npos;
    EXPECT_TRUE(warned);
}

TEST(Evidence, ConcurrentFetchesKeepRankOrder) {
    vt::MemoryWorld w;
    vt::SerpSpec s;
    for (int i = 0; i < 8; ++i) {
        const std::string url = "https://h" + std::to_string(i) + ".example/a";
        s.links.push_back(url);
        w.store->addPage(url, vt::articleHtml("Page " + std::to_string(i), {"Some article text with enough words."}));
    }
    w.store->addSerp("q", vt::serpHtml(s));
    w.build(8);
    const auto b = w.retriever->retrieveEvidence("q", RetrievalStrategy::ArticlesOnly, 8);
    ASSERT_EQ(b.passages.size(), 8u);
    for (int i = 0; i < 8; ++i) EXPECT_EQ(b.passages[static_cast<std::size_t>(i)].sourceUrl, s.links[static_cast<std::size_t>(i)]);
}

TEST(Evidence, SearchTemplateExpansion) {
    const auto u = expandSearchTemplate("https://s.example/find?q={query}&n={num}", "a b?", 10);
    EXPECT_EQ(u.str(), "https://s.example/find?q=a+b%3F&n=10");
    EXPECT_THROW(expandSearchTemplate("not a url {query}", "x", 1), Error);
}

// ---------------------------------------------------------------------------
// Against a local HTTP server
// ---------------------------------------------------------------------------

TEST(LiveServer, DisallowedPathNeverRequested) {
    vt::LocalServer srv;
    vt::serveRobotsSite(srv);
    srv.start();
    PolitenessConfig pc = fastPolite();
    auto client = std::make_shared<PoliteClient>(std::make_shared<LiveFetcher>(LiveFetchConfig{}), pc);
    Retriever r(std::make_shared<LiveSearchProvider>(client, srv.searchBase() + "/search?q={query}&num={num}"), client,
                std::make_shared<const SelectorConfig>(selectors()));
    const auto b = r.retrieveEvidence("anything", RetrievalStrategy::ArticlesOnly, 4);
    EXPECT_EQ(b.passages.size(), 2u);
    EXPECT_THROW(client->get(*Url::parse(srv.base() + "/go")), RobotsDisallowed);
    EXPECT_THROW(client->get(*Url::parse(srv.base() + "/private/direct")), RobotsDisallowed);
    srv.stop();
    EXPECT_EQ(srv.hits(vt::isPrivatePath), 0u);
    EXPECT_EQ(srv.hits([](const std::string& p) { return p == "/robots.txt"; }), 2u);
    EXPECT_EQ(srv.hits([](const std::string& p) { return p == "/go"; }), 2u);
}

TEST(LiveServer, SearchPageBlockedByRobots) {
    vt::LocalServer srv;
    srv.server().Get("/robots.txt", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("User-agent: *\nDisallow: /search\n", "text/plain");
    });
    srv.start();
    auto client = std::make_shared<PoliteClient>(std::make_shared<LiveFetcher>(LiveFetchConfig{}), fastPolite());
    LiveSearchProvider p(client, srv.base() + "/search?q={query}");
    EXPECT_THROW(p.fetchSerp("x", 3), SearchBlocked);
    srv.stop();
    EXPECT_EQ(srv.hits([](const std::string& path) { return path == "/search"; }), 0u);
}

TEST(LiveServer, SendsUserAgent) {
    vt::LocalServer srv;
    std::string seen;
    srv.server().Get("/ua", [&seen](const httplib::Request& req, httplib::Response& res) {
        seen = req.get_header_value("User-Agent");
        res.set_content("ok", "text/plain");
    });
    srv.start();
    LiveFetchConfig cfg;
    cfg.userAgent = "veritas-test/9";
    LiveFetcher f(cfg);
    const long before = LiveFetcher::requestCount().load();
    EXPECT_EQ(f.get(*Url::parse(srv.base() + "/ua")).body, "ok");
    EXPECT_EQ(LiveFetcher::requestCount().load(), before + 1);
    srv.stop();
    EXPECT_EQ(seen, "veritas-test/9");
}

TEST(LiveServer, TransportFailureIsStatusZero) {
    LiveFetchConfig cfg;
    cfg.timeout = std::chrono::seconds(1);
    LiveFetcher f(cfg);
    vt::LocalServer srv;
    srv.start();
    const int port = srv.port();
    srv.stop();
    EXPECT_EQ(f.get(*Url::parse("http://127.0.0.1:" + std::to_string(port) + "/")).status, 0);
}
