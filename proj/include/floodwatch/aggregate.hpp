#pragma once

#include "floodwatch/gazetteer.hpp"
#include "floodwatch/geometry.hpp"
#include "floodwatch/message.hpp"
#include "floodwatch/router.hpp"
#include "floodwatch/selection.hpp"
#include "floodwatch/text.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace floodwatch {

struct GeoMatch {
    std::string nuts2_id;
    std::string name;        ///< the matched name variant, lowercased
    std::size_t entry = 0;   ///< index into Gazetteer::entries()
};

/// Whole-word, case-insensitive place-name lookup. The longest matching
/// name (in code points) wins; ties go to the larger population, then the
/// lexicographically smaller name, then the smaller NUTS id.
class GazetteerIndex {
public:
    explicit GazetteerIndex(const Gazetteer& gazetteer);

    std::optional<GeoMatch> geocode(std::string_view text) const;
    std::optional<GeoMatch> geocode_tokens(const std::vector<std::string>& tokens) const;

private:
    struct Variant {
        std::size_t entry;
        std::string name;
        std::size_t length;
    };
    bool better(const Variant& a, const Variant& b) const;

    const Gazetteer* gazetteer_;
    std::vector<Variant> variants_;
    text::PhraseIndex index_;
};

std::optional<GeoMatch> geocode_text(std::string_view text, const Gazetteer& gazetteer);

enum class Activity { grey, orange, red };
const char* to_string(Activity a);

/// Relevant-to-total ratio cut points for orange and red.
struct ActivityThresholds {
    double low = 0.1;
    double high = 0.3;
};

/// red at ratio >= high, orange at >= low, grey otherwise (and when total = 0).
Activity activity_level(std::size_t relevant, std::size_t total, const ActivityThresholds& t);

struct AggregateConfig {
    double relevance_threshold = 0.9;
    ActivityThresholds activity;
    std::uint64_t jitter_seed = 1;
    double jitter_degrees = 0.01;

    void validate() const;
};

struct AreaAggregate {
    std::string nuts2_id;
    std::size_t total_messages = 0;
    std::size_t relevant_messages = 0;
    Activity activity = Activity::grey;
};

enum class LocationSource { coordinates, text };

struct LocatedMessage {
    std::size_t input_index = 0;
    std::string message_id;
    std::string nuts2_id;
    LatLon point;
    LocationSource source = LocationSource::coordinates;
    double confidence = 0.0;
};

struct AggregationResult {
    std::vector<AreaAggregate> areas;      ///< sorted by nuts2_id
    std::vector<LocatedMessage> located;   ///< input order
    std::size_t unlocatable = 0;
};

/// Locates each message (coordinates inside a polygon first, else gazetteer
/// text match naming a place of a known area) and counts totals and relevant messages per area. Areas in
/// `include_areas` appear even with no messages.
AggregationResult aggregate(std::span<const ClassifiedMessage> classified, const AreaSet& areas,
                            const Gazetteer& gazetteer, const AggregateConfig& cfg,
                            const std::vector<std::string>& include_areas = {}, Execution exec = Execution::parallel);

using RepresentativesByArea = std::map<std::string, std::vector<RepresentativeTweet>>;

/// GeoJSON FeatureCollection: one polygon feature per aggregate (activity,
/// counts, representatives), then one point feature per relevant located
/// message, ordered by area id then message id. Points sharing a location
/// get a seeded jitter. Throws Error for an aggregate with an unknown area.
nlohmann::json emit_layer(const AggregationResult& result, const RepresentativesByArea& representatives,
                          const AreaSet& areas, const AggregateConfig& cfg);

}  // namespace floodwatch
