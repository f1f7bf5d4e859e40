#pragma once

#include "floodwatch/levenshtein.hpp"
#include "floodwatch/message.hpp"
#include "floodwatch/router.hpp"

#include <json.hpp>

#include <span>
#include <vector>

namespace floodwatch {

struct SelectionConfig {
    double min_probability = 0.9;
    std::size_t pool_cap = 5000;
    double prob_bucket = 0.0001;
    double dup_similarity = 0.8;
    std::size_t top_unique = 100;
    std::size_t output_count = 5;

    void validate() const;
};

struct RepresentativeTweet {
    Message message;
    double confidence = 0.0;
    std::size_t multiplicity = 1;  ///< 1 + near-duplicates resolved to this message
    double centrality = 0.0;       ///< summed similarity to the other top uniques
    std::size_t rank = 0;          ///< 1-based
};

nlohmann::json to_json(const RepresentativeTweet& r);
RepresentativeTweet representative_from_json(const nlohmann::json& j);

/// Step 1: messages at or above min_probability; when more than pool_cap,
/// the most confident ones (ties: older, then id). Sorted in that order.
std::vector<ClassifiedMessage> candidate_pool(std::span<const ClassifiedMessage> classified,
                                              const SelectionConfig& cfg);

struct UniqueMessage {
    std::size_t pool_index = 0;
    std::size_t multiplicity = 1;
};

struct DedupeResult {
    std::vector<std::size_t> root_of;    ///< pool index -> pool index of its oldest root
    std::vector<UniqueMessage> uniques;  ///< in pool order
};

/// Step 2: compares only pairs whose confidences differ by at most
/// prob_bucket; a pair above dup_similarity makes the newer message a
/// duplicate of the older. Duplicate chains resolve to the oldest member.
DedupeResult dedupe(std::span<const ClassifiedMessage> pool, const SelectionConfig& cfg,
                    Execution exec = Execution::parallel);

/// Steps 1-4, ranked by centrality, then multiplicity, then age, then id.
std::vector<RepresentativeTweet> select_representatives(std::span<const ClassifiedMessage> classified,
                                                        const SelectionConfig& cfg = {},
                                                        Execution exec = Execution::parallel);

}  // namespace floodwatch
