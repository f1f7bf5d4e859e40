#include "generators.hpp"
#include "oracles.hpp"

#include "floodwatch/selection.hpp"

#include <gtest/gtest.h>

using namespace floodwatch;

namespace {

ClassifiedMessage cm(const std::string& id, const std::string& text, double conf, int minute) {
    ClassifiedMessage c;
    c.message.id = id;
    c.message.text = text;
    c.message.created_at = gen::base_time() + std::chrono::minutes(minute);
    c.confidence = conf;
    return c;
}

std::vector<std::string> summary(const std::vector<RepresentativeTweet>& reps) {
    std::vector<std::string> out;
    for (const auto& r : reps) {
        out.push_back(r.message.id + "/" + std::to_string(r.multiplicity) + "/" + std::to_string(r.rank) + "/" +
                      std::to_string(r.centrality));
    }
    return out;
}

}  // namespace

TEST(Selection, PoolFiltersAndCaps) {
    std::vector<ClassifiedMessage> in = {cm("a", "x", 0.95, 3), cm("b", "y", 0.89, 1), cm("c", "z", 0.99, 2),
                                         cm("d", "w", 0.95, 1)};
    SelectionConfig cfg;
    auto pool = candidate_pool(in, cfg);
    ASSERT_EQ(pool.size(), 3u);
    EXPECT_EQ(pool[0].message.id, "c");
    EXPECT_EQ(pool[1].message.id, "d");
    cfg.pool_cap = 2;
    pool = candidate_pool(in, cfg);
    ASSERT_EQ(pool.size(), 2u);
    EXPECT_EQ(pool[1].message.id, "d");
}

TEST(Selection, DuplicateChainsResolveToOldest) {
    const std::vector<ClassifiedMessage> pool = {cm("new", "flood warning in cosenza now", 0.95, 9),
                                                 cm("mid", "flood warning in cosenza now!", 0.95, 5),
                                                 cm("old", "flood warning in cosenza now!!", 0.95, 1),
                                                 cm("other", "completely different text here", 0.95, 2)};
    const auto d = dedupe(pool, SelectionConfig{});
    EXPECT_EQ(d.root_of[0], 2u);
    EXPECT_EQ(d.root_of[1], 2u);
    EXPECT_EQ(d.root_of[2], 2u);
    EXPECT_EQ(d.root_of[3], 3u);
    ASSERT_EQ(d.uniques.size(), 2u);
    EXPECT_EQ(d.uniques[0].pool_index, 2u);
    EXPECT_EQ(d.uniques[0].multiplicity, 3u);
}

TEST(Selection, BucketSeparatesConfidences) {
    const std::vector<ClassifiedMessage> pool = {cm("a", "same text", 0.95, 1), cm("b", "same text", 0.96, 2)};
    EXPECT_EQ(dedupe(pool, SelectionConfig{}).uniques.size(), 2u);
}

TEST(Selection, RanksAndLimitsOutput) {
    std::vector<ClassifiedMessage> in;
    for (int i = 0; i < 12; ++i) {
        in.push_back(cm("m" + std::to_string(i), "river flooding street number " + std::to_string(i * 7919), 0.9 + i * 0.001, i));
    }
    in.push_back(cm("dup", "river flooding street number 0", 0.9, 30));
    const auto reps = select_representatives(in);
    ASSERT_EQ(reps.size(), 5u);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        EXPECT_EQ(reps[i].rank, i + 1);
        if (i > 0) {
            EXPECT_GE(reps[i - 1].centrality, reps[i].centrality);
        }
    }
    EXPECT_EQ(summary(reps), summary(oracle::quadratic_select(in, SelectionConfig{})));
    EXPECT_TRUE(select_representatives({}).empty());
}

TEST(Selection, SerialEqualsParallel) {
    std::vector<ClassifiedMessage> in;
    for (int i = 0; i < 150; ++i) {
        in.push_back(cm("m" + std::to_string(i), "alluvione " + std::to_string(i % 17), 0.9 + (i % 5) * 0.00005, i));
    }
    EXPECT_EQ(summary(select_representatives(in, {}, Execution::serial)),
              summary(select_representatives(in, {}, Execution::parallel)));
}

TEST(Selection, JsonRoundTrip) {
    RepresentativeTweet r;
    r.message = cm("x", "acqua alta", 0.97, 4).message;
    r.confidence = 0.97;
    r.multiplicity = 3;
    r.centrality = 1.25;
    r.rank = 2;
    const auto back = representative_from_json(to_json(r));
    EXPECT_EQ(back.message, r.message);
    EXPECT_EQ(back.multiplicity, 3u);
    EXPECT_EQ(back.rank, 2u);
    EXPECT_DOUBLE_EQ(back.centrality, 1.25);
}
