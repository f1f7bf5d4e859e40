#include "generators.hpp"
#include "oracles.hpp"

#include "floodwatch/geometry.hpp"

#include <gtest/gtest.h>

using namespace floodwatch;

namespace {

Area square(const std::string& id, double lat0, double lon0, double size) {
    Area a;
    a.nuts_id = id;
    a.parts.push_back({{{lat0, lon0}, {lat0, lon0 + size}, {lat0 + size, lon0 + size}, {lat0 + size, lon0}}, {}});
    a.envelope = {lat0, lon0, lat0 + size, lon0 + size};
    return a;
}

}  // namespace

TEST(Geometry, ClassifyPoint) {
    const Ring r = square("AA11", 0, 0, 2).parts[0].outer;
    EXPECT_EQ(classify_point(r, {1, 1}), RingSide::inside);
    EXPECT_EQ(classify_point(r, {0, 1}), RingSide::boundary);
    EXPECT_EQ(classify_point(r, {2, 2}), RingSide::boundary);
    EXPECT_EQ(classify_point(r, {3, 1}), RingSide::outside);
}

TEST(Geometry, HolesExcludeOnlyTheirInterior) {
    Area a = square("AA11", 0, 0, 4);
    a.parts[0].holes.push_back({{1, 1}, {1, 3}, {3, 3}, {3, 1}});
    EXPECT_FALSE(area_contains(a, {2, 2}));
    EXPECT_TRUE(area_contains(a, {1, 2}));
    EXPECT_TRUE(area_contains(a, {0.5, 0.5}));
}

TEST(Geometry, PointInAreaPicksContainerOrNone) {
    const AreaSet set({square("BB22", 10, 10, 1), square("AA11", 0, 0, 1)});
    EXPECT_EQ(set.point_in_area({0.5, 0.5}), "AA11");
    EXPECT_EQ(set.point_in_area({10.5, 10.5}), "BB22");
    EXPECT_FALSE(set.point_in_area({5, 5}));
    EXPECT_EQ(set.areas().front().nuts_id, "AA11");
}

TEST(Geometry, NutsCodes) {
    EXPECT_TRUE(is_nuts2_code("ITF6"));
    EXPECT_TRUE(is_nuts2_code("DE11"));
    EXPECT_FALSE(is_nuts2_code("itf6"));
    EXPECT_FALSE(is_nuts2_code("ITF"));
    EXPECT_FALSE(is_nuts2_code("1TF6"));
}

TEST(Geometry, GeoJsonRoundTrip) {
    Area a = square("ITF6", 38, 15, 2);
    a.parts[0].holes.push_back({{38.5, 15.5}, {38.5, 16}, {39, 16}});
    a.parts.push_back(square("ITF6", 30, 30, 1).parts[0]);
    const AreaSet set({a, square("ITF3", 40, 14, 1)});
    const AreaSet back = AreaSet::from_geojson(set.to_geojson());
    ASSERT_EQ(back.areas().size(), 2u);
    const Area* b = back.find("ITF6");
    ASSERT_NE(b, nullptr);
    EXPECT_EQ(b->parts.size(), 2u);
    EXPECT_EQ(b->parts[0].holes.size(), 1u);
    EXPECT_EQ(b->parts[0].outer, a.parts[0].outer);
    EXPECT_EQ(b->envelope, (BBox{30, 15, 40, 31}));
}

TEST(Geometry, RejectsBadGeoJson) {
    EXPECT_THROW(AreaSet::from_geojson(nlohmann::json::parse(R"({"type":"Feature"})")), ConfigError);
    EXPECT_THROW(AreaSet::from_geojson(nlohmann::json::parse(
                     R"({"type":"FeatureCollection","features":[{"type":"Feature","properties":{},
                         "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,0]]]}}]})")),
                 ConfigError);
}

TEST(Geometry, AgreesWithRayCasting) {
    gen::Rng rng(5);
    for (int round = 0; round < 5; ++round) {
        const auto areas = gen::random_areas(rng, 6);
        const AreaSet set(areas);
        for (int k = 0; k < 200; ++k) {
            const auto& c = areas[k % areas.size()].parts[0].outer[0];
            const LatLon p{c.lat + std::uniform_real_distribution<double>(-9, 9)(rng),
                           c.lon + std::uniform_real_distribution<double>(-9, 9)(rng)};
            EXPECT_EQ(set.point_in_area(p), oracle::ray_cast_area(areas, p));
        }
    }
}
