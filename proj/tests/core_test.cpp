#include <gtest/gtest.h>

#include "veritas/core.hpp"
#include "veritas/text.hpp"

using namespace veritas;

TEST(Labels, SixWayMapping) {
    EXPECT_EQ(mapLiarLabel(SixWayLabel::True), BinaryLabel::Reliable);
    EXPECT_EQ(mapLiarLabel(SixWayLabel::MostlyTrue), BinaryLabel::Reliable);
    EXPECT_EQ(mapLiarLabel(SixWayLabel::HalfTrue), BinaryLabel::Reliable);
    EXPECT_EQ(mapLiarLabel(SixWayLabel::BarelyTrue), BinaryLabel::Unreliable);
    EXPECT_EQ(mapLiarLabel(SixWayLabel::False), BinaryLabel::Unreliable);
    EXPECT_EQ(mapLiarLabel(SixWayLabel::PantsFire), BinaryLabel::Unreliable);
}

TEST(Labels, ExactlyThreePerClass) {
    int reliable = 0;
    for (auto l : kAllSixWayLabels) reliable += mapLiarLabel(l) == BinaryLabel::Reliable;
    EXPECT_EQ(reliable, 3);
}

TEST(Labels, ParseRoundTrip) {
    for (auto l : kAllSixWayLabels) EXPECT_EQ(parseSixWayLabel(toString(l)), l);
}

TEST(Labels, ParseSpellings) {
    EXPECT_EQ(parseSixWayLabel("Pants on Fire"), SixWayLabel::PantsFire);
    EXPECT_EQ(parseSixWayLabel("MOSTLY_TRUE"), SixWayLabel::MostlyTrue);
    EXPECT_EQ(parseSixWayLabel(" half true "), SixWayLabel::HalfTrue);
    EXPECT_FALSE(parseSixWayLabel("maybe"));
    EXPECT_FALSE(parseSixWayLabel(""));
}

TEST(Labels, Binary) {
    EXPECT_EQ(parseBinaryLabel("TRUE"), BinaryLabel::Reliable);
    EXPECT_EQ(parseBinaryLabel("1"), BinaryLabel::Reliable);
    EXPECT_EQ(parseBinaryLabel("False"), BinaryLabel::Unreliable);
    EXPECT_EQ(parseBinaryLabel("0"), BinaryLabel::Unreliable);
    EXPECT_FALSE(parseBinaryLabel("yes"));
    EXPECT_EQ(toString(BinaryLabel::Reliable), "true");
}

TEST(Claim, Validate) {
    ClaimRecord c{"c1", "  ", BinaryLabel::Reliable, std::nullopt, std::nullopt, std::nullopt};
    EXPECT_THROW(c.validate(), DatasetFormatError);
    c.text = "Headline";
    EXPECT_NO_THROW(c.validate());
    c.rawLabel = SixWayLabel::PantsFire;
    EXPECT_THROW(c.validate(), DatasetFormatError);
    c.rawLabel = SixWayLabel::HalfTrue;
    EXPECT_NO_THROW(c.validate());
}

TEST(Kinds, NamesRoundTrip) {
    for (auto p : kAllPipelines) EXPECT_EQ(parsePipelineKind(toString(p)), p);
    for (auto s : kAllScorers) EXPECT_EQ(parseScorerKind(toString(s)), s);
    EXPECT_FALSE(parsePipelineKind("bogus"));
    EXPECT_FALSE(parseScorerKind("summac"));
}

TEST(Decide, InclusiveThreshold) {
    EXPECT_EQ(decide(0.5, 0.5), BinaryLabel::Reliable);
    EXPECT_EQ(decide(0.4999, 0.5), BinaryLabel::Unreliable);
    EXPECT_EQ(decide(-1.0, -1.0), BinaryLabel::Reliable);
}

TEST(ScoreRange, PerScorer) {
    EXPECT_NO_THROW(checkScoreRange(ScorerKind::FactCC, 1.0));
    EXPECT_THROW(checkScoreRange(ScorerKind::FactCC, -0.1), ContractViolation);
    EXPECT_NO_THROW(checkScoreRange(ScorerKind::SummacZS, -1.0));
    EXPECT_THROW(checkScoreRange(ScorerKind::SummacConv, 1.01), ContractViolation);
    EXPECT_THROW(checkScoreRange(ScorerKind::SummacZS, std::nan("")), ContractViolation);
}

namespace {
EvidenceBundle bundle() {
    EvidenceBundle b;
    b.query = "q";
    b.stage = EvidenceStage::Articles;
    b.passages = {{"https://a/1", "one"}, {"https://b/2", "two"}, {"https://a/1", "three"}};
    return b;
}
}  // namespace

TEST(Evidence, ValidateAndSources) {
    auto b = bundle();
    EXPECT_NO_THROW(b.validate());
    EXPECT_EQ(b.sourceUrls(), (std::vector<std::string>{"https://a/1", "https://b/2"}));
    b.stage = EvidenceStage::QuickAnswer;
    EXPECT_THROW(b.validate(), ContractViolation);
    b.passages.resize(1);
    EXPECT_NO_THROW(b.validate());
    b.passages[0].text = " ";
    EXPECT_THROW(b.validate(), ContractViolation);
    b.passages.clear();
    EXPECT_THROW(b.validate(), ContractViolation);
}

TEST(Verdict, DerivedFromScore) {
    auto v = VerdictRecord::make("id", PipelineKind::Article, ScorerKind::SummacZS, 0.3, 0.2, bundle(), {1.0, 0.5, 0.0});
    EXPECT_EQ(v.verdict, BinaryLabel::Reliable);
    v = VerdictRecord::make("id", PipelineKind::Article, ScorerKind::SummacZS, 0.1, 0.2, bundle(), {});
    EXPECT_EQ(v.verdict, BinaryLabel::Unreliable);
    EXPECT_THROW(VerdictRecord::make("id", PipelineKind::Article, ScorerKind::FactCC, 1.5, 0.5, bundle(), {}),
                 ContractViolation);
    EXPECT_THROW(VerdictRecord::make("id", PipelineKind::Article, ScorerKind::FactCC, 0.5, 0.5, bundle(), {-1.0, 0, 0}),
                 ContractViolation);
}

TEST(Timings, TotalIsScrapePlusScore) {
    StageTimings t{6.7175, 0.2514, 3.0};
    EXPECT_NEAR(t.total(), 6.9689, 1e-12);
}

TEST(Text, Whitespace) {
    EXPECT_EQ(text::normalizeWhitespace("  a \t b\n\nc  "), "a b c");
    EXPECT_EQ(text::normalizeLines(" a  b \n\n  c "), "a b\nc");
    EXPECT_EQ(text::splitWhitespace(" x  y "), (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(text::join({"a", "b", "c"}, ", "), "a, b, c");
}

TEST(Text, Fnv1aKnownValues) {
    EXPECT_EQ(text::hex64(text::fnv1a64("")), "cbf29ce484222325");
    EXPECT_EQ(text::hex64(text::fnv1a64("a")), "af63dc4c8601ec8c");
}

TEST(Text, Utf8) {
    std::string s;
    text::appendUtf8(s, 0x20AC);
    EXPECT_EQ(s, "\xE2\x82\xAC");
    s.clear();
    text::appendUtf8(s, 0xD800);
    EXPECT_EQ(s, "\xEF\xBF\xBD");
}
