#include "oracles.hpp"
#include "test_support.hpp"

#include "vscript/metrics.hpp"
#include "vscript/mock_backend.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace vscript;
using Seq = TokenSequence;
using testing_support::code_of;

namespace {

class FixedScorer final : public PerplexityScorer {
public:
    explicit FixedScorer(std::map<std::string, PerplexityScore> m) : m_(std::move(m)) {}
    PerplexityScore score_perplexity(const std::string& t) override { return m_.at(t); }

private:
    std::map<std::string, PerplexityScore> m_;
};

class FixedEmbedder final : public Embedder {
public:
    explicit FixedEmbedder(std::map<std::string, std::vector<float>> m) : m_(std::move(m)) {}
    std::vector<Embedding> embed_texts(const std::vector<std::string>& texts) override {
        std::vector<Embedding> out;
        for (const auto& t : texts) out.push_back(Embedding{m_.at(t), false});
        return out;
    }

private:
    std::map<std::string, std::vector<float>> m_;
};

} // namespace

TEST(DistinctN, HandExamples) {
    EXPECT_DOUBLE_EQ(distinct_n({{"a", "a", "a", "a"}}, 1), 0.25);
    EXPECT_DOUBLE_EQ(distinct_n({{"a", "b", "a"}}, 2), 1.0);
    EXPECT_EQ(code_of([] { distinct_n({{"a"}}, 2); }), ErrorCode::NoNgrams);
}

TEST(DistinctN, PoolsAcrossCorpus) {
    EXPECT_DOUBLE_EQ(distinct_n({{"a", "b"}, {"a", "c"}}, 1), 0.75);
}

TEST(RepeatRate, HandExamples) {
    EXPECT_DOUBLE_EQ(repeat_rate({"a", "b", "c"}), 0.0);
    EXPECT_DOUBLE_EQ(repeat_rate({"a", "a"}), 50.0);
    EXPECT_DOUBLE_EQ(repeat_rate({"a", "b", "c", "d", "e", "f", "g", "h", "i", "a"}), 0.0);
    EXPECT_DOUBLE_EQ(repeat_rate({"a", "b", "c", "d", "e", "f", "g", "h", "a"}), 100.0 / 9.0);
    EXPECT_EQ(code_of([] { repeat_rate({}); }), ErrorCode::EmptySequence);
}

TEST(RepeatRate, AppendingRecentTokenNeverDecreases) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        Seq s;
        auto len = 1 + rng() % 30;
        for (std::size_t i = 0; i < len; ++i) s.push_back(std::string(1, static_cast<char>('a' + rng() % 6)));
        auto before = repeat_rate(s);
        auto back = std::min<std::size_t>(s.size(), 8);
        s.push_back(s[s.size() - 1 - rng() % back]);
        EXPECT_GE(repeat_rate(s), before);
    }
}

TEST(Metrics, MatchBruteForceOracle) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        auto alphabet = 1 + rng() % 10;
        std::vector<Seq> corpus(1 + rng() % 3);
        for (auto& s : corpus) {
            auto len = 1 + rng() % 50;
            for (std::size_t i = 0; i < len; ++i) s.push_back("t" + std::to_string(rng() % alphabet));
            EXPECT_EQ(repeat_rate(s), oracle::repeat_rate(s));
        }
        for (std::size_t n = 1; n <= 3; ++n) {
            bool any = false;
            for (const auto& s : corpus) any = any || s.size() >= n;
            if (any) EXPECT_EQ(distinct_n(corpus, n), oracle::distinct_n(corpus, n));
        }
    }
}

TEST(CorpusBleu, IdentityIsOne) {
    std::vector<Seq> c{{"the", "cat", "sat", "down"}, {"a", "b", "c", "d", "e"}};
    EXPECT_EQ(corpus_bleu(c, c), 1.0);
}

TEST(CorpusBleu, BrevityPenaltyOnly) {
    EXPECT_NEAR(corpus_bleu({{"a", "b", "c", "d"}}, {{"a", "b", "c", "d", "e"}}), std::exp(-0.25), 1e-12);
}

TEST(CorpusBleu, DisjointPairUsesSmoothedFloor) {
    Seq cand{"a", "b", "c", "d", "e", "f", "g", "h"};
    Seq ref{"p", "q", "r", "s", "t", "u", "v", "w"};
    // p_n = 1 / (2 * (9 - n)) for n = 1..4, BP = 1 (c == r is not c > r, exp(0) = 1)
    double expected = std::pow(1.0 / (16.0 * 14.0 * 12.0 * 10.0), 0.25);
    EXPECT_NEAR(corpus_bleu({cand}, {ref}), expected, 1e-12);
}

TEST(CorpusBleu, DisjointCorpusFallsBelowFivePercent) {
    std::vector<Seq> c, r;
    for (int i = 0; i < 8; ++i) {
        Seq a, b;
        for (int k = 0; k < 8; ++k) {
            a.push_back("x" + std::to_string(i * 8 + k));
            b.push_back("y" + std::to_string(i * 8 + k));
        }
        c.push_back(a);
        r.push_back(b);
    }
    EXPECT_LT(corpus_bleu(c, r), 0.05);
}

TEST(CorpusBleu, ClipsRepeatedCandidateNgrams) {
    // unigram precision 2/7 after clipping, higher orders smoothed
    double got = corpus_bleu({{"the", "the", "the", "the", "the", "the", "the"}}, {{"the", "cat", "is", "on", "the", "mat", "x"}});
    double p1 = 2.0 / 7.0;
    double expected = std::exp((std::log(p1) + std::log(1.0 / 12.0) + std::log(1.0 / 10.0) + std::log(1.0 / 8.0)) / 4.0);
    EXPECT_NEAR(got, expected, 1e-12);
}

TEST(CorpusBleu, PermutationInvariant) {
    std::vector<Seq> c{{"a", "b", "c", "d", "x"}, {"e", "f", "g", "h"}}, r{{"a", "b", "c", "d"}, {"e", "f", "q", "h", "i"}};
    std::vector<Seq> c2{c[1], c[0]}, r2{r[1], r[0]};
    EXPECT_DOUBLE_EQ(corpus_bleu(c, r), corpus_bleu(c2, r2));
}

TEST(CorpusBleu, Errors) {
    EXPECT_EQ(code_of([] { corpus_bleu({{"a"}}, {}); }), ErrorCode::LengthMismatch);
    EXPECT_EQ(code_of([] { corpus_bleu({}, {}); }), ErrorCode::EmptyCandidate);
    EXPECT_EQ(code_of([] { corpus_bleu({{}}, {{"a"}}); }), ErrorCode::EmptyCandidate);
}

TEST(SentenceSimilarity, HandVectors) {
    FixedEmbedder e({{"x", {1, 0}}, {"y", {0, 1}}, {"z", {float(std::sqrt(2.0) / 2), float(std::sqrt(2.0) / 2)}}});
    EXPECT_NEAR(sentence_similarity("x", "y", e).value, 0.0, 1e-12);
    EXPECT_NEAR(sentence_similarity("x", "z", e).value, 0.70710678, 1e-6);
}

TEST(SentenceSimilarity, IdenticalTextsWithMock) {
    HashEmbedder e;
    EXPECT_NEAR(sentence_similarity("the ship lands", "the ship lands", e).value, 1.0, 1e-6);
    auto a = e.embed_texts({"", "x"});
    auto s = cosine_similarity(a[0], a[1]);
    EXPECT_TRUE(s.degenerate);
    EXPECT_EQ(s.value, 0.0);
}

TEST(GenreAccuracy, MockClassifierFixture) {
    LexiconClassifier cls(builtin_lexicons());
    std::vector<std::string> texts{"the detective found the murder weapon", "an alien spaceship landed",
                                   "the soldier joined the army", "a detective and a police gun"};
    std::vector<Genre> targets{Genre::Crime, Genre::SciFi, Genre::War, Genre::Romance};
    EXPECT_DOUBLE_EQ(genre_accuracy(texts, targets, cls), 0.75);
    EXPECT_DOUBLE_EQ(genre_accuracy({texts[0]}, {Genre::Crime}, cls), 1.0);
    EXPECT_DOUBLE_EQ(genre_accuracy({texts[0]}, {Genre::War}, cls), 0.0);
}

TEST(GenreAccuracy, TiesCountAsWrong) {
    LexiconClassifier cls(builtin_lexicons());
    EXPECT_DOUBLE_EQ(genre_accuracy({"nothing relevant here"}, {Genre::Crime}, cls), 0.0);
    EXPECT_EQ(code_of([&] { genre_accuracy({"a"}, {}, cls); }), ErrorCode::LengthMismatch);
}

TEST(Perplexity, TokenWeighted) {
    FixedScorer s({{"zero", {0.0, 5}}, {"a", {1.0, 10}}, {"b", {3.0, 30}}});
    EXPECT_DOUBLE_EQ(mean_perplexity({"zero"}, s), 1.0);
    EXPECT_NEAR(mean_perplexity({"a", "b"}, s), std::exp(2.5), 1e-9);
    EXPECT_DOUBLE_EQ(mean_perplexity({"a", "b"}, s), mean_perplexity({"b", "a"}, s));
}

TEST(MetricReport, JsonScalesFractions) {
    MetricReport r;
    r.distinct[1] = 0.5;
    r.bleu = 0.25;
    r.repeat_pct = 10.0;
    auto j = report_to_json(r, 100.0);
    EXPECT_DOUBLE_EQ(j["distinct"]["1"].get<double>(), 50.0);
    EXPECT_DOUBLE_EQ(j["bleu"].get<double>(), 25.0);
    EXPECT_DOUBLE_EQ(j["repeat_pct"].get<double>(), 10.0);
    EXPECT_TRUE(j["ppl"].is_null());
}
