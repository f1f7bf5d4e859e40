#include "floodwatch/aggregate.hpp"

#include "floodwatch/kernels.hpp"

#include <algorithm>
#include <random>

namespace floodwatch {

GazetteerIndex::GazetteerIndex(const Gazetteer& gazetteer) : gazetteer_(&gazetteer) {
    const auto& entries = gazetteer.entries();
    for (std::size_t e = 0; e < entries.size(); ++e) {
        for (const auto& name : entries[e].all_names()) {
            std::string lower = text::to_lower(name);
            const std::size_t id = variants_.size();
            if (index_.add(lower, id)) {
                variants_.push_back({e, lower, text::code_point_count(lower)});
            }
        }
    }
}

bool GazetteerIndex::better(const Variant& a, const Variant& b) const {
    if (a.length != b.length) {
        return a.length > b.length;
    }
    const auto& ea = gazetteer_->entries()[a.entry];
    const auto& eb = gazetteer_->entries()[b.entry];
    if (ea.population != eb.population) {
        return ea.population > eb.population;
    }
    if (a.name != b.name) {
        return a.name < b.name;
    }
    return ea.nuts2_id < eb.nuts2_id;
}

std::optional<GeoMatch> GazetteerIndex::geocode_tokens(const std::vector<std::string>& tokens) const {
    const Variant* best = nullptr;
    for (const auto& hit : index_.find_all(tokens)) {
        const Variant& v = variants_[hit.phrase];
        if (best == nullptr || better(v, *best)) {
            best = &v;
        }
    }
    if (best == nullptr) {
        return std::nullopt;
    }
    return GeoMatch{gazetteer_->entries()[best->entry].nuts2_id, best->name, best->entry};
}

std::optional<GeoMatch> GazetteerIndex::geocode(std::string_view text) const {
    return geocode_tokens(text::tokenize(text));
}

std::optional<GeoMatch> geocode_text(std::string_view text, const Gazetteer& gazetteer) {
    return GazetteerIndex(gazetteer).geocode(text);
}

const char* to_string(Activity a) {
    switch (a) {
        case Activity::grey: return "grey";
        case Activity::orange: return "orange";
        case Activity::red: return "red";
    }
    return "grey";
}

Activity activity_level(std::size_t relevant, std::size_t total, const ActivityThresholds& t) {
    if (total == 0) {
        return Activity::grey;
    }
    const double ratio = static_cast<double>(relevant) / static_cast<double>(total);
    if (ratio >= t.high) {
        return Activity::red;
    }
    if (ratio >= t.low) {
        return Activity::orange;
    }
    return Activity::grey;
}

void AggregateConfig::validate() const {
    if (!(relevance_threshold >= 0.0 && relevance_threshold <= 1.0)) {
        throw ConfigError("relevance threshold must be in [0, 1]");
    }
    if (!(activity.low >= 0.0 && activity.low <= activity.high && activity.high <= 1.0)) {
        throw ConfigError("activity thresholds must satisfy 0 <= low <= high <= 1");
    }
    if (jitter_degrees < 0.0 || jitter_degrees > 0.01) {
        throw ConfigError("jitter must be within [0, 0.01] degrees");
    }
}

AggregationResult aggregate(std::span<const ClassifiedMessage> classified, const AreaSet& areas,
                            const Gazetteer& gazetteer, const AggregateConfig& cfg,
                            const std::vector<std::string>& include_areas, Execution exec) {
    cfg.validate();
    std::vector<LatLon> points;
    std::vector<std::size_t> with_coords;
    for (std::size_t i = 0; i < classified.size(); ++i) {
        if (classified[i].message.coords) {
            points.push_back(*classified[i].message.coords);
            with_coords.push_back(i);
        }
    }
    const auto hits = exec == Execution::parallel ? kernels::locate_batch_parallel(areas, points)
                                                  : kernels::locate_batch_serial(areas, points);
    std::vector<int> by_coords(classified.size(), -1);
    for (std::size_t k = 0; k < with_coords.size(); ++k) {
        by_coords[with_coords[k]] = hits[k];
    }

    const GazetteerIndex index(gazetteer);
    std::map<std::string, AreaAggregate> counts;
    for (const auto& id : include_areas) {
        counts[id].nuts2_id = id;
    }
    AggregationResult out;
    for (std::size_t i = 0; i < classified.size(); ++i) {
        const auto& c = classified[i];
        LocatedMessage loc;
        loc.input_index = i;
        loc.message_id = c.message.id;
        loc.confidence = c.confidence;
        if (by_coords[i] >= 0) {
            loc.nuts2_id = areas.areas()[static_cast<std::size_t>(by_coords[i])].nuts_id;
            loc.point = *c.message.coords;
            loc.source = LocationSource::coordinates;
        } else if (auto m = index.geocode(c.message.text); m && areas.contains_id(m->nuts2_id)) {
            loc.nuts2_id = m->nuts2_id;
            loc.point = gazetteer.entries()[m->entry].location;
            loc.source = LocationSource::text;
        } else {
            ++out.unlocatable;
            continue;
        }
        auto& agg = counts[loc.nuts2_id];
        agg.nuts2_id = loc.nuts2_id;
        ++agg.total_messages;
        if (c.confidence >= cfg.relevance_threshold) {
            ++agg.relevant_messages;
        }
        out.located.push_back(std::move(loc));
    }
    for (auto& [id, agg] : counts) {
        agg.activity = activity_level(agg.relevant_messages, agg.total_messages, cfg.activity);
        out.areas.push_back(agg);
    }
    return out;
}

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ULL ^ seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

nlohmann::json representative_props(const RepresentativeTweet& r) {
    return {{"id", r.message.id},
            {"text", r.message.text},
            {"created_at", format_utc(r.message.created_at)},
            {"confidence", r.confidence},
            {"multiplicity", r.multiplicity},
            {"centrality", r.centrality},
            {"rank", r.rank}};
}

}  // namespace

nlohmann::json emit_layer(const AggregationResult& result, const RepresentativesByArea& representatives,
                          const AreaSet& areas, const AggregateConfig& cfg) {
    cfg.validate();
    auto features = nlohmann::json::array();
    for (const auto& agg : result.areas) {
        const Area* area = areas.find(agg.nuts2_id);
        if (area == nullptr) {
            throw Error("aggregate refers to unknown area " + agg.nuts2_id);
        }
        auto polys = nlohmann::json::array();
        for (const auto& part : area->parts) {
            auto rings = nlohmann::json::array({ring_to_geojson(part.outer)});
            for (const auto& h : part.holes) {
                rings.push_back(ring_to_geojson(h));
            }
            polys.push_back(rings);
        }
        auto reps = nlohmann::json::array();
        if (auto it = representatives.find(agg.nuts2_id); it != representatives.end()) {
            for (const auto& r : it->second) {
                reps.push_back(representative_props(r));
            }
        }
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "MultiPolygon"}, {"coordinates", polys}}},
                            {"properties",
                             {{"kind", "area"},
                              {"NUTS_ID", agg.nuts2_id},
                              {"activity", to_string(agg.activity)},
                              {"total_messages", agg.total_messages},
                              {"relevant_messages", agg.relevant_messages},
                              {"representatives", reps}}}});
    }

    std::vector<const LocatedMessage*> points;
    for (const auto& loc : result.located) {
        if (loc.confidence >= cfg.relevance_threshold) {
            points.push_back(&loc);
        }
    }
    std::sort(points.begin(), points.end(), [](const LocatedMessage* a, const LocatedMessage* b) {
        return a->nuts2_id != b->nuts2_id ? a->nuts2_id < b->nuts2_id : a->message_id < b->message_id;
    });
    std::map<std::pair<double, double>, std::size_t> seen;
    for (const LocatedMessage* loc : points) {
        LatLon p = loc->point;
        if (seen[{p.lat, p.lon}]++ > 0 && cfg.jitter_degrees > 0.0) {
            std::mt19937_64 rng(fnv1a(loc->message_id, cfg.jitter_seed));
            std::uniform_real_distribution<double> u(-cfg.jitter_degrees, cfg.jitter_degrees);
            p.lat = std::clamp(p.lat + u(rng), -90.0, 90.0);
            p.lon = std::clamp(p.lon + u(rng), -180.0, 180.0);
        }
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", {p.lon, p.lat}}}},
                            {"properties",
                             {{"kind", "message"},
                              {"id", loc->message_id},
                              {"NUTS_ID", loc->nuts2_id},
                              {"confidence", loc->confidence},
                              {"source", loc->source == LocationSource::coordinates ? "coordinates" : "text"}}}});
    }
    return {{"type", "FeatureCollection"}, {"features", features}};
}

}  // namespace floodwatch
