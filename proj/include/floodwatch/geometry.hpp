#pragma once

#include "floodwatch/common.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace floodwatch {

/// Closed ring without the repeated closing vertex.
using Ring = std::vector<LatLon>;

struct Polygon {
    Ring outer;
    std::vector<Ring> holes;
};

/// One NUTS-2 region, possibly multi-part.
struct Area {
    std::string nuts_id;
    std::vector<Polygon> parts;
    BBox envelope;
};

/// Where a point sits relative to a ring.
enum class RingSide { outside, boundary, inside };

RingSide classify_point(const Ring& ring, const LatLon& p);

/// Inside or on the boundary of the part (holes excluded, hole edges included).
bool polygon_contains(const Polygon& poly, const LatLon& p);
bool area_contains(const Area& area, const LatLon& p);

/// NUTS code shape: two uppercase letters then two uppercase letters or digits.
bool is_nuts2_code(std::string_view id);

/// The NUTS-2 polygon set, sorted by id.
class AreaSet {
public:
    AreaSet() = default;
    explicit AreaSet(std::vector<Area> areas);

    /// GeoJSON FeatureCollection of Polygon/MultiPolygon features with a
    /// `NUTS_ID` property. Coordinates are [lon, lat].
    static AreaSet from_geojson(const nlohmann::json& doc);
    static AreaSet load(const std::filesystem::path& path);
    nlohmann::json to_geojson() const;

    const std::vector<Area>& areas() const { return areas_; }
    const Area* find(std::string_view id) const;
    bool contains_id(std::string_view id) const { return find(id) != nullptr; }

    /// Index of the first area (by id) containing the point, or -1.
    int locate_index(const LatLon& p) const;
    std::optional<std::string> point_in_area(const LatLon& p) const;

private:
    std::vector<Area> areas_;
};

nlohmann::json ring_to_geojson(const Ring& ring);

}  // namespace floodwatch
