#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "litcmp/embeddings.hpp"
#include "litcmp/errors.hpp"
#include "litcmp/tokenize.hpp"
#include "test_support.hpp"

using namespace litcmp;

TEST(Tokenize, CamelCaseAndPunctuation) {
    EXPECT_EQ(tokenize_label("disambiguationTask"), (std::vector<std::string>{"disambiguation", "task"}));
    EXPECT_EQ(tokenize_label("has evaluation"), (std::vector<std::string>{"has", "evaluation"}));
    EXPECT_EQ(tokenize_label("ex:disambiguationTask"),
              (std::vector<std::string>{"ex", "disambiguation", "task"}));
    EXPECT_EQ(tokenize_label("F1-score (micro)"), (std::vector<std::string>{"f1", "score", "micro"}));
    EXPECT_EQ(tokenize_label("HTTPServer"), (std::vector<std::string>{"httpserver"}));
    EXPECT_EQ(tokenize_label("  "), std::vector<std::string>{});
    EXPECT_EQ(tokenize_label("größe"), (std::vector<std::string>{"größe"}));
}

TEST(WordVectors, ParsesWithAndWithoutHeader) {
    auto with = WordVectors::parse("2 3\nfoo 1 2 3\nbar 0 0 1\n");
    EXPECT_EQ(with.dimension(), 3u);
    EXPECT_EQ(with.vocabulary_size(), 2u);
    auto without = WordVectors::parse("foo 1 2 3\nbar 0 0 1");
    EXPECT_EQ(without.dimension(), 3u);
    ASSERT_NE(without.word("foo"), nullptr);
    EXPECT_EQ(*without.word("foo"), (Vector{1, 2, 3}));
}

TEST(WordVectors, RejectsRaggedFiles) {
    EXPECT_THROW(WordVectors::parse("foo 1 2 3\nbar 1 2\n"), ValidationError);
    EXPECT_THROW(WordVectors::parse("foo 1 x 3\n"), ValidationError);
    EXPECT_THROW(WordVectors::parse("2 3\nfoo 1 2\n"), ValidationError);
}

TEST(WordVectors, UnloadedProviderIsAStateError) {
    WordVectors empty;
    EXPECT_FALSE(empty.loaded());
    EXPECT_THROW(empty.embed("anything"), StateError);
}

TEST(WordVectors, SingleTokenIsExact) {
    auto wv = WordVectors::load(litcmp::testing::fixture_path("vectors_small.txt"));
    EXPECT_EQ(wv.embed("population"), (Vector{1, 0, 0}));
    EXPECT_EQ(wv.embed("Population"), (Vector{1, 0, 0}));
}

TEST(WordVectors, TwoTokenLabelIsComponentwiseMean) {
    auto wv = WordVectors::load(litcmp::testing::fixture_path("vectors_small.txt"));
    // population = (1, 0, 0), total = (0.92, 0.56, 0); mean by hand:
    auto v = wv.embed("populationTotal");
    ASSERT_EQ(v.size(), 3u);
    EXPECT_NEAR(v[0], 0.96, 1e-12);
    EXPECT_NEAR(v[1], 0.28, 1e-12);
    EXPECT_NEAR(v[2], 0.0, 1e-12);
    // Unknown tokens are ignored when averaging.
    EXPECT_EQ(wv.embed("population zzz"), (Vector{1, 0, 0}));
}

TEST(WordVectors, UnknownTokensGiveZeroVector) {
    auto wv = WordVectors::load(litcmp::testing::fixture_path("vectors_small.txt"));
    auto v = wv.embed("qwerty uiop");
    EXPECT_EQ(v, (Vector{0, 0, 0}));
    EXPECT_EQ(cosine(v, wv.embed("population")), 0.0);
    EXPECT_EQ(cosine(v, v), 0.0);
}

TEST(Cosine, HandValues) {
    EXPECT_NEAR(cosine(Vector{1, 0, 0}, Vector{0.96, 0.28, 0}), 0.96, 1e-12);
    EXPECT_EQ(cosine(Vector{1, 0}, Vector{0, 1}), 0.0);
    EXPECT_NEAR(cosine(Vector{1, 1}, Vector{-1, -1}), -1.0, 1e-12);
    EXPECT_THROW(cosine(Vector{1}, Vector{1, 2}), ValidationError);
}

TEST(EmbeddingCache, EmbedsEachLabelOnce) {
    auto wv = WordVectors::load(litcmp::testing::fixture_path("vectors_small.txt"));
    CountingProvider counting(wv);
    EmbeddingCache cache(counting);
    auto a = cache.get("population");
    auto b = cache.get("population");
    cache.get("total");
    EXPECT_EQ(a.get(), b.get());
    EXPECT_EQ(counting.calls(), 2u);
    EXPECT_EQ(cache.size(), 2u);
}

TEST(EmbeddingCache, ConcurrentLookupsEmbedOnce) {
    auto wv = WordVectors::load(litcmp::testing::fixture_path("vectors_small.txt"));
    CountingProvider counting(wv);
    EmbeddingCache cache(counting);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 200; ++i) cache.get("label " + std::to_string(i % 20));
        });
    }
    for (auto& t : threads) t.join();
    EXPECT_EQ(counting.calls(), 20u);
}
