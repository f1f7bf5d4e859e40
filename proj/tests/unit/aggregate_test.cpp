#include "generators.hpp"
#include "oracles.hpp"

#include "floodwatch/aggregate.hpp"
#include "floodwatch/scenario.hpp"

#include <gtest/gtest.h>

using namespace floodwatch;

namespace {

ClassifiedMessage cm(const std::string& id, const std::string& text, double conf,
                     std::optional<LatLon> coords = std::nullopt) {
    ClassifiedMessage c;
    c.message.id = id;
    c.message.text = text;
    c.message.created_at = gen::base_time();
    c.message.coords = coords;
    c.confidence = conf;
    return c;
}

const GazetteerEntry& entry(const Gazetteer& g, const std::string& name) {
    for (const auto& e : g.entries()) {
        if (e.name == name) {
            return e;
        }
    }
    throw std::runtime_error("missing " + name);
}

}  // namespace

TEST(Geocode, LongestNameWins) {
    const auto gaz = scenario_gazetteer();
    const auto m = geocode_text("Allagamenti a Lamezia Terme stanotte", gaz);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->name, "lamezia terme");
    EXPECT_EQ(m->nuts2_id, "ITF6");
    const auto t = geocode_text("water rising in Torre del Greco", gaz);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->nuts2_id, "ITF3");
    EXPECT_FALSE(geocode_text("nothing to see", gaz));
    EXPECT_FALSE(geocode_text("Napolitano", gaz));
}

TEST(Geocode, AlternateNamesAndCase) {
    const auto gaz = scenario_gazetteer();
    const auto m = geocode_text("NEAPEL unter Wasser", gaz);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->nuts2_id, "ITF3");
    EXPECT_EQ(gaz.entries()[m->entry].name, "Napoli");
}

TEST(Geocode, MatchesExhaustiveScan) {
    const auto gaz = scenario_gazetteer();
    for (const std::string text : {"flood in Reggio Calabria and Napoli", "Terme e Lamezia Terme", "#Salerno allagata",
                                   "@Napoli non conta", "giugliano in campania", "Lamezia"}) {
        const auto a = geocode_text(text, gaz);
        const auto b = oracle::exhaustive_geocode(text, gaz);
        ASSERT_EQ(a.has_value(), b.has_value()) << text;
        if (a) {
            EXPECT_EQ(a->nuts2_id, b->nuts2_id) << text;
            EXPECT_EQ(a->name, b->name) << text;
        }
    }
}

TEST(Activity, Thresholds) {
    const ActivityThresholds t;
    EXPECT_EQ(activity_level(0, 0, t), Activity::grey);
    EXPECT_EQ(activity_level(0, 10, t), Activity::grey);
    EXPECT_EQ(activity_level(1, 10, t), Activity::orange);
    EXPECT_EQ(activity_level(3, 10, t), Activity::red);
    EXPECT_STREQ(to_string(Activity::orange), "orange");
}

TEST(Aggregate, CountsAndSources) {
    const auto areas = scenario_areas();
    const auto gaz = scenario_gazetteer();
    const auto reggio = entry(gaz, "Reggio Calabria").location;
    const std::vector<ClassifiedMessage> msgs = {
        cm("1", "alluvione", 0.95, reggio),
        cm("2", "pioggia a Napoli", 0.2),
        cm("3", "Napoli allagata", 0.93),
        cm("4", "Milano sotto acqua", 0.99),
        cm("5", "niente", 0.99),
        cm("6", "Napoli", 0.5, LatLon{0.0, 0.0}),
    };
    const auto r = aggregate(msgs, areas, gaz, AggregateConfig{}, {"ITF6", "ITF3"});
    ASSERT_EQ(r.areas.size(), 2u);
    EXPECT_EQ(r.areas[0].nuts2_id, "ITF3");
    EXPECT_EQ(r.areas[0].total_messages, 3u);
    EXPECT_EQ(r.areas[0].relevant_messages, 1u);
    EXPECT_EQ(r.areas[0].activity, Activity::red);
    EXPECT_EQ(r.areas[1].nuts2_id, "ITF6");
    EXPECT_EQ(r.areas[1].total_messages, 1u);
    EXPECT_EQ(r.unlocatable, 2u);
    ASSERT_EQ(r.located.size(), 4u);
    EXPECT_EQ(r.located[0].source, LocationSource::coordinates);
    EXPECT_EQ(r.located[1].source, LocationSource::text);
    EXPECT_EQ(aggregate(msgs, areas, gaz, AggregateConfig{}, {"ITF6", "ITF3"}, Execution::serial).located.size(), 4u);
}

TEST(Aggregate, IncludedAreasAppearEmpty) {
    const auto r = aggregate({}, scenario_areas(), scenario_gazetteer(), AggregateConfig{}, {"ITF6"});
    ASSERT_EQ(r.areas.size(), 1u);
    EXPECT_EQ(r.areas[0].activity, Activity::grey);
}

TEST(Layer, FeaturesAndJitter) {
    const auto areas = scenario_areas();
    const auto gaz = scenario_gazetteer();
    const std::vector<ClassifiedMessage> msgs = {cm("b", "Napoli", 0.95), cm("a", "Napoli ancora", 0.97),
                                                 cm("c", "Napoli", 0.1)};
    const auto r = aggregate(msgs, areas, gaz, AggregateConfig{});
    RepresentativesByArea reps;
    reps["ITF3"].push_back({msgs[1].message, 0.97, 1, 0.0, 1});
    const auto layer = emit_layer(r, reps, areas, AggregateConfig{});
    EXPECT_EQ(layer["type"], "FeatureCollection");
    const auto& f = layer["features"];
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[0]["geometry"]["type"], "MultiPolygon");
    EXPECT_EQ(f[0]["properties"]["NUTS_ID"], "ITF3");
    EXPECT_EQ(f[0]["properties"]["activity"], "red");
    EXPECT_EQ(f[0]["properties"]["representatives"].size(), 1u);
    EXPECT_EQ(f[1]["properties"]["id"], "a");
    EXPECT_EQ(f[2]["properties"]["id"], "b");
    EXPECT_NE(f[1]["geometry"]["coordinates"], f[2]["geometry"]["coordinates"]);
    EXPECT_EQ(layer, emit_layer(r, reps, areas, AggregateConfig{}));

    AggregationResult bad;
    bad.areas.push_back({"ZZ99", 0, 0, Activity::grey});
    EXPECT_THROW(emit_layer(bad, {}, areas, AggregateConfig{}), Error);
}
