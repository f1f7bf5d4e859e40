#pragma once

// Slow, obviously-correct reference implementations used by the tests.

#include "floodwatch/aggregate.hpp"
#include "floodwatch/cnn.hpp"
#include "floodwatch/gazetteer.hpp"
#include "floodwatch/geometry.hpp"
#include "floodwatch/message.hpp"
#include "floodwatch/query.hpp"
#include "floodwatch/selection.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using namespace floodwatch;

/// Wagner-Fischer table over code points.
std::size_t dp_levenshtein(const std::u32string& a, const std::u32string& b);

/// Text reduced to single-space-separated lowercase words, padded with one
/// space at each end. Mentions and URLs become a "|" separator.
std::string padded_words(const std::string& text);

/// Event ids of `msg`, by checking every keyword and box of the query.
std::vector<std::string> brute_force_match(const Message& msg, const StreamQuery& query);

/// Crossing-number test with an explicit on-edge check (edges count as inside).
bool ray_cast_inside(const Ring& ring, const LatLon& p);
std::optional<std::string> ray_cast_area(const std::vector<Area>& areas, const LatLon& p);

struct ScanPick {
    std::string nuts2_id;
    std::string name;
};

/// Tries every gazetteer name against the text.
std::optional<ScanPick> exhaustive_geocode(const std::string& text, const Gazetteer& gazetteer);

/// Quadratic, DP-distance version of the representative selection.
std::vector<RepresentativeTweet> quadratic_select(const std::vector<ClassifiedMessage>& classified,
                                                  const SelectionConfig& cfg);

/// Multiplicities (sorted) of the all-pairs duplicate resolution over a pool.
std::vector<std::size_t> quadratic_multiplicities(const std::vector<ClassifiedMessage>& pool,
                                                  const SelectionConfig& cfg);

struct FdResult {
    double max_relative_error = 0.0;
    std::size_t checked = 0;
};

/// Central differences of the mean batch loss for every parameter, compared
/// with CnnModel::gradients.
FdResult finite_difference_check(const CnnModel& model, const std::vector<EncodedText>& batch,
                                 const std::vector<int>& labels, double epsilon = 1e-5);

}  // namespace oracle
