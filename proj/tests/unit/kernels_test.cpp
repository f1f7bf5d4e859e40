#include "generators.hpp"

#include "floodwatch/cnn.hpp"
#include "floodwatch/dataset.hpp"
#include "floodwatch/kernels.hpp"
#include "floodwatch/levenshtein.hpp"
#include "floodwatch/query.hpp"
#include "floodwatch/router.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace floodwatch;

TEST(Kernels, MatchBatch) {
    gen::Rng rng(1);
    const auto query = build_query(gen::random_events(rng, 10, 200));
    const auto msgs = gen::messages_for_query(rng, query, 2000);
    const QueryMatcher m(query);
    EXPECT_EQ(kernels::match_batch_serial(m, msgs), kernels::match_batch_parallel(m, msgs));
}

TEST(Kernels, LocateBatch) {
    gen::Rng rng(2);
    const AreaSet areas(gen::random_areas(rng, 12));
    std::vector<LatLon> pts;
    std::uniform_real_distribution<double> lat(35, 60), lon(-10, 30);
    for (int i = 0; i < 3000; ++i) {
        pts.push_back({lat(rng), lon(rng)});
    }
    const auto s = kernels::locate_batch_serial(areas, pts);
    EXPECT_EQ(s, kernels::locate_batch_parallel(areas, pts));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_EQ(s[i], areas.locate_index(pts[i]));
    }
}

TEST(Kernels, SimilarityAndNearDuplicates) {
    gen::Rng rng(3);
    std::vector<LevenshteinPattern> texts;
    std::vector<double> conf;
    for (int i = 0; i < 120; ++i) {
        const auto base = gen::unicode_string(rng, 60);
        texts.emplace_back(base);
        texts.emplace_back(gen::mutate(rng, base, 2));
        conf.push_back(0.9 + i * 0.00003);
        conf.push_back(0.9 + i * 0.00003);
    }
    std::sort(conf.begin(), conf.end());
    const auto ms = kernels::similarity_matrix_serial(texts);
    EXPECT_EQ(ms, kernels::similarity_matrix_parallel(texts));
    EXPECT_DOUBLE_EQ(ms[0], 1.0);
    const auto ps = kernels::near_duplicate_pairs_serial(texts, conf, 0.0001, 0.8);
    EXPECT_FALSE(ps.empty());
    EXPECT_EQ(ps, kernels::near_duplicate_pairs_parallel(texts, conf, 0.0001, 0.8));
    EXPECT_TRUE(std::is_sorted(ps.begin(), ps.end()));
}

TEST(Kernels, InferBatch) {
    gen::Rng rng(4);
    std::vector<std::string> vocab;
    for (int i = 0; i < 50; ++i) {
        vocab.push_back("w" + std::to_string(i));
    }
    auto space = std::make_shared<const EmbeddingSpace>(EmbeddingSpace::agnostic(gen::random_table(rng, vocab, 8)));
    CnnConfig cfg;
    cfg.seq_len = 20;
    cfg.filters = 16;
    cfg.hidden = 8;
    const CnnModel model(cfg, space, 5);
    std::vector<EncodedText> inputs;
    std::uniform_int_distribution<int> pick(0, 60);
    for (int i = 0; i < 300; ++i) {
        EncodedText e;
        for (int k = 0; k < 1 + i % 25; ++k) {
            e.tokens.push_back("w" + std::to_string(pick(rng)));
        }
        inputs.push_back(std::move(e));
    }
    const auto s = kernels::infer_batch_serial(model, inputs);
    EXPECT_EQ(s, kernels::infer_batch_parallel(model, inputs));
    EXPECT_EQ(s[7], model.classify(inputs[7]));
}
