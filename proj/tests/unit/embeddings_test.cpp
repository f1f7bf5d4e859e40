#include "floodwatch/embeddings.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace floodwatch;

TEST(Embeddings, ParseSkipsHeaderAndBadLines) {
    const auto load = parse_embeddings("3 2\nacqua 0.5 -1\nfiume 1 2 3\nponte nan 1\nacqua 2 2\ncittà 0.25 0\n");
    EXPECT_EQ(load.table.dim(), 2u);
    EXPECT_EQ(load.table.size(), 2u);
    EXPECT_EQ(load.rejected_lines, 2u);
    EXPECT_EQ(load.duplicate_tokens, 1u);
    ASSERT_NE(load.table.find("acqua"), nullptr);
    EXPECT_EQ(load.table.find("acqua")[0], 2.0);
    EXPECT_EQ(load.table.find("fiume"), nullptr);
    EXPECT_NE(load.table.find("città"), nullptr);
}

TEST(Embeddings, EmptyInputIsAnError) {
    EXPECT_THROW(parse_embeddings(""), ConfigError);
    EXPECT_THROW(load_embeddings("/nonexistent/file.txt"), ConfigError);
}

TEST(Embeddings, SerializeRoundTripIsExact) {
    EmbeddingTable t(3);
    const double v1[] = {0.1, -1e-300, 1.0 / 3.0};
    const double v2[] = {12345.678, 0.0, -2.5};
    t.set("a", v1);
    t.set("b", v2);
    EXPECT_EQ(parse_embeddings(serialize_embeddings(t)).table, t);
}

TEST(Embeddings, SetChecksShape) {
    EmbeddingTable t(2);
    const double bad[] = {1.0, 2.0, 3.0};
    EXPECT_THROW(t.set("x", bad), Error);
    const double inf[] = {1.0, INFINITY};
    EXPECT_THROW(t.set("x", inf), Error);
}

TEST(Embeddings, SequenceTruncatesAndZeroesOov) {
    EmbeddingTable t(2);
    const double v[] = {1.0, 2.0};
    t.set("a", v);
    const auto m = embed_sequence({"a", "zzz", "a"}, t, 2);
    EXPECT_EQ(m.rows, 2u);
    EXPECT_EQ(m.valid_length, 2u);
    EXPECT_EQ(m.values, (std::vector<double>{1, 2, 0, 0}));
}

TEST(Embeddings, AlignedSpaceNeedsLanguage) {
    auto [a, b] = make_toy_aligned_embeddings({{"water", "acqua"}, {"river", "fiume"}}, 4, 1, "en", "it");
    std::map<std::string, EmbeddingTable> tables;
    tables.emplace("en", a);
    tables.emplace("it", b);
    const auto space = EmbeddingSpace::aligned(tables);
    EXPECT_TRUE(space.covers("it"));
    EXPECT_FALSE(space.covers("de"));
    EXPECT_THROW(space.table_for("de"), ConfigError);
    const auto x = space.embed({"water"}, "en");
    const auto y = space.embed({"acqua"}, "it");
    EXPECT_EQ(x.values, y.values);
    double norm = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        norm += x.values[i] * x.values[i];
    }
    EXPECT_NEAR(norm, 1.0, 1e-12);
    EXPECT_THROW(make_toy_aligned_embeddings({{"a", "x"}, {"a", "y"}}, 2, 1), Error);
}

TEST(Embeddings, AgnosticSpaceIgnoresLanguage) {
    EmbeddingTable t(1);
    const double v[] = {3.0};
    t.set("x", v);
    const auto space = EmbeddingSpace::agnostic(t);
    EXPECT_EQ(space.embed({"x"}, "fr").values[0], 3.0);
}
