#pragma once

#include "floodwatch/forecast.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <vector>

namespace floodwatch {

/// Hard limits of the public filter stream.
struct QueryLimits {
    std::size_t max_keywords = 400;
    std::size_t max_keyword_bytes = 60;  ///< exclusive: every keyword is strictly shorter
    std::size_t max_boxes = 25;

    void validate() const;
};

struct QueryKeyword {
    std::string text;
    std::int64_t population = 0;
    std::set<std::string> owners;
};

struct QueryBox {
    BBox box;
    std::set<std::string> owners;
};

/// The single filter request covering every active event.
struct StreamQuery {
    std::vector<QueryKeyword> keywords;
    std::vector<QueryBox> boxes;
};

nlohmann::json to_json(const StreamQuery& q);
StreamQuery query_from_json(const nlohmann::json& j);

struct CitySelection {
    std::vector<CityKeyword> keywords;
    std::vector<std::string> dropped_too_long;
};

/// Name variants of every gazetteer city in `area_id` with population at or
/// above the threshold: lowercased, deduplicated, ordered by population
/// (descending) then name. Names of max_keyword_bytes or more are dropped.
CitySelection select_cities(const std::string& area_id, const Gazetteer& gazetteer,
                            const TriggerConfig& cfg, const QueryLimits& limits = {});

/// Merges active events into one query. Over-limit boxes are merged pairwise
/// by smallest added envelope area; over-limit keywords are dropped lowest
/// population first (ties: lexicographically later name first).
StreamQuery build_query(const std::vector<CollectionEvent>& events, const QueryLimits& limits = {});

/// Area the envelope of `a` and `b` covers beyond a ∪ b.
double added_envelope_area(const BBox& a, const BBox& b);

struct QueryViolation {
    enum class Kind { too_many_keywords, keyword_too_long, too_many_boxes, ownerless_keyword, ownerless_box };
    Kind kind;
    std::string detail;
};

/// Every violated constraint; empty means the query is acceptable.
std::vector<QueryViolation> validate_query(const StreamQuery& q, const QueryLimits& limits = {});

}  // namespace floodwatch
