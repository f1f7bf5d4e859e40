#include "generators.hpp"
#include "oracles.hpp"

#include "floodwatch/levenshtein.hpp"

#include <gtest/gtest.h>

using namespace floodwatch;

TEST(Levenshtein, KnownDistances) {
    EXPECT_EQ(edit_distance(std::string_view("kitten"), std::string_view("sitting")), 3u);
    EXPECT_EQ(edit_distance(std::string_view(""), std::string_view("abc")), 3u);
    EXPECT_EQ(edit_distance(std::string_view("flaw"), std::string_view("lawn")), 2u);
    EXPECT_EQ(edit_distance(std::string_view("città"), std::string_view("citta")), 1u);
    EXPECT_EQ(edit_distance(std::string_view("🌊🌊"), std::string_view("🌊")), 1u);
}

TEST(Levenshtein, SimilarityBounds) {
    EXPECT_DOUBLE_EQ(similarity_from_distance(0, 0, 0), 1.0);
    EXPECT_DOUBLE_EQ(similarity_from_distance(3, 3, 0), 0.0);
    EXPECT_DOUBLE_EQ(similarity_from_distance(3, 6, 7), 1.0 - 3.0 / 13.0);
    EXPECT_DOUBLE_EQ(normalized_similarity("Flood in Napoli http://t.co/x", "flood in   napoli https://t.co/y"), 1.0);
}

TEST(Levenshtein, MultiWordPatternsMatchDp) {
    gen::Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        const auto a = gen::unicode_string(rng, 280);
        const auto b = i % 2 ? gen::mutate(rng, a, 1 + i % 9) : gen::unicode_string(rng, 280);
        const auto expected = oracle::dp_levenshtein(a, b);
        EXPECT_EQ(edit_distance(a, b), expected);
        const LevenshteinPattern pa(a), pb(b);
        EXPECT_EQ(pa.distance(b), expected);
        EXPECT_EQ(pb.distance(a), expected);
        EXPECT_EQ(edit_distance(pa, pb), expected);
    }
}

TEST(Levenshtein, WordBoundaryLengths) {
    for (std::size_t n : {63u, 64u, 65u, 127u, 128u, 129u}) {
        const std::u32string a(n, U'a');
        std::u32string b = a;
        b[n / 2] = U'é';
        EXPECT_EQ(LevenshteinPattern(a).distance(b), 1u);
        EXPECT_EQ(LevenshteinPattern(a).distance(U""), n);
    }
}
