#include "floodwatch/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace floodwatch {

namespace {

// > 0 when p is left of the directed line a->b.
double orient(const LatLon& a, const LatLon& b, const LatLon& p) {
    return (b.lon - a.lon) * (p.lat - a.lat) - (p.lon - a.lon) * (b.lat - a.lat);
}

bool on_segment(const LatLon& a, const LatLon& b, const LatLon& p) {
    if (orient(a, b, p) != 0.0) {
        return false;
    }
    return p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon) &&
           p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat);
}

Ring parse_ring(const nlohmann::json& coords) {
    Ring ring;
    for (const auto& c : coords) {
        if (!c.is_array() || c.size() < 2) {
            throw ConfigError("GeoJSON position must be [lon, lat]");
        }
        ring.push_back({c[1].get<double>(), c[0].get<double>()});
    }
    if (ring.size() > 1 && ring.front() == ring.back()) {
        ring.pop_back();
    }
    if (ring.size() < 3) {
        throw ConfigError("GeoJSON ring needs at least 3 distinct vertices");
    }
    return ring;
}

Polygon parse_polygon(const nlohmann::json& rings) {
    if (!rings.is_array() || rings.empty()) {
        throw ConfigError("GeoJSON polygon without rings");
    }
    Polygon poly;
    poly.outer = parse_ring(rings[0]);
    for (std::size_t i = 1; i < rings.size(); ++i) {
        poly.holes.push_back(parse_ring(rings[i]));
    }
    return poly;
}

BBox ring_envelope(const Ring& ring) {
    BBox b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : ring) {
        b.min_lat = std::min(b.min_lat, p.lat);
        b.min_lon = std::min(b.min_lon, p.lon);
        b.max_lat = std::max(b.max_lat, p.lat);
        b.max_lon = std::max(b.max_lon, p.lon);
    }
    return b;
}

}  // namespace

RingSide classify_point(const Ring& ring, const LatLon& p) {
    // Winding number; lon is x, lat is y.
    int winding = 0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const LatLon& a = ring[i];
        const LatLon& b = ring[(i + 1) % n];
        if (on_segment(a, b, p)) {
            return RingSide::boundary;
        }
        if (a.lat <= p.lat) {
            if (b.lat > p.lat && orient(a, b, p) > 0.0) {
                ++winding;
            }
        } else if (b.lat <= p.lat && orient(a, b, p) < 0.0) {
            --winding;
        }
    }
    return winding != 0 ? RingSide::inside : RingSide::outside;
}

bool polygon_contains(const Polygon& poly, const LatLon& p) {
    RingSide outer = classify_point(poly.outer, p);
    if (outer == RingSide::outside) {
        return false;
    }
    if (outer == RingSide::boundary) {
        return true;
    }
    for (const auto& hole : poly.holes) {
        if (classify_point(hole, p) == RingSide::inside) {
            return false;
        }
    }
    return true;
}

bool area_contains(const Area& area, const LatLon& p) {
    if (!area.envelope.contains(p)) {
        return false;
    }
    return std::any_of(area.parts.begin(), area.parts.end(),
                       [&](const Polygon& poly) { return polygon_contains(poly, p); });
}

bool is_nuts2_code(std::string_view id) {
    auto upper = [](char c) { return c >= 'A' && c <= 'Z'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    return id.size() == 4 && upper(id[0]) && upper(id[1]) && (upper(id[2]) || digit(id[2])) &&
           (upper(id[3]) || digit(id[3]));
}

AreaSet::AreaSet(std::vector<Area> areas) : areas_(std::move(areas)) {
    for (auto& a : areas_) {
        if (a.parts.empty()) {
            throw ConfigError("area " + a.nuts_id + " has no polygons");
        }
        a.envelope = ring_envelope(a.parts.front().outer);
        for (const auto& part : a.parts) {
            a.envelope = a.envelope.envelope(ring_envelope(part.outer));
        }
    }
    std::sort(areas_.begin(), areas_.end(), [](const Area& x, const Area& y) { return x.nuts_id < y.nuts_id; });
    for (std::size_t i = 1; i < areas_.size(); ++i) {
        if (areas_[i].nuts_id == areas_[i - 1].nuts_id) {
            throw ConfigError("duplicate area " + areas_[i].nuts_id);
        }
    }
}

AreaSet AreaSet::from_geojson(const nlohmann::json& doc) {
    if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features")) {
        throw ConfigError("NUTS polygons must be a GeoJSON FeatureCollection");
    }
    std::vector<Area> areas;
    for (const auto& f : doc["features"]) {
        const auto& props = f.at("properties");
        if (!props.contains("NUTS_ID")) {
            throw ConfigError("feature without NUTS_ID property");
        }
        Area area;
        area.nuts_id = props["NUTS_ID"].get<std::string>();
        const auto& geom = f.at("geometry");
        const std::string type = geom.at("type").get<std::string>();
        if (type == "Polygon") {
            area.parts.push_back(parse_polygon(geom.at("coordinates")));
        } else if (type == "MultiPolygon") {
            for (const auto& poly : geom.at("coordinates")) {
                area.parts.push_back(parse_polygon(poly));
            }
        } else {
            throw ConfigError("unsupported geometry type " + type + " for " + area.nuts_id);
        }
        areas.push_back(std::move(area));
    }
    return AreaSet(std::move(areas));
}

AreaSet AreaSet::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open polygons " + path.string());
    }
    try {
        return from_geojson(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad GeoJSON in " + path.string() + ": " + e.what());
    }
}

nlohmann::json ring_to_geojson(const Ring& ring) {
    auto coords = nlohmann::json::array();
    for (const auto& p : ring) {
        coords.push_back({p.lon, p.lat});
    }
    if (!ring.empty()) {
        coords.push_back({ring.front().lon, ring.front().lat});
    }
    return coords;
}

nlohmann::json AreaSet::to_geojson() const {
    auto features = nlohmann::json::array();
    for (const auto& a : areas_) {
        auto polys = nlohmann::json::array();
        for (const auto& part : a.parts) {
            auto rings = nlohmann::json::array({ring_to_geojson(part.outer)});
            for (const auto& h : part.holes) {
                rings.push_back(ring_to_geojson(h));
            }
            polys.push_back(rings);
        }
        features.push_back({{"type", "Feature"},
                            {"properties", {{"NUTS_ID", a.nuts_id}}},
                            {"geometry", {{"type", "MultiPolygon"}, {"coordinates", polys}}}});
    }
    return {{"type", "FeatureCollection"}, {"features", features}};
}

const Area* AreaSet::find(std::string_view id) const {
    auto it = std::lower_bound(areas_.begin(), areas_.end(), id,
                               [](const Area& a, std::string_view key) { return a.nuts_id < key; });
    return it != areas_.end() && it->nuts_id == id ? &*it : nullptr;
}

int AreaSet::locate_index(const LatLon& p) const {
    for (std::size_t i = 0; i < areas_.size(); ++i) {
        if (area_contains(areas_[i], p)) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

std::optional<std::string> AreaSet::point_in_area(const LatLon& p) const {
    int idx = locate_index(p);
    if (idx < 0) {
        return std::nullopt;
    }
    return areas_[static_cast<std::size_t>(idx)].nuts_id;
}

}  // namespace floodwatch
