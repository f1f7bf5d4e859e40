#include "generators.hpp"
#include "oracles.hpp"

#include "floodwatch/router.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace floodwatch;
namespace fs = std::filesystem;

namespace {

StreamQuery sample_query() {
    StreamQuery q;
    q.keywords.push_back({"napoli", 900, {"E1"}});
    q.keywords.push_back({"torre del greco", 80, {"E1", "E2"}});
    q.boxes.push_back({{38, 15, 40, 17}, {"E2"}});
    return q;
}

Message msg(const std::string& id, const std::string& text, std::optional<LatLon> at = {}) {
    return {id, text, gen::base_time(), at, {}};
}

}  // namespace

TEST(Router, KeywordAndBoxMatching) {
    const auto q = sample_query();
    EXPECT_EQ(match_events(msg("1", "Alluvione a #Napoli"), q), (std::vector<std::string>{"E1"}));
    EXPECT_EQ(match_events(msg("2", "TORRE DEL GRECO allagata"), q), (std::vector<std::string>{"E1", "E2"}));
    EXPECT_TRUE(match_events(msg("3", "napoletano"), q).empty());
    EXPECT_TRUE(match_events(msg("4", "@napoli ciao"), q).empty());
    EXPECT_TRUE(match_events(msg("5", "https://napoli.it"), q).empty());
    EXPECT_EQ(match_events(msg("6", "no keyword", LatLon{40, 17}), q), (std::vector<std::string>{"E2"}));
    EXPECT_TRUE(match_events(msg("7", "no keyword", LatLon{41, 17}), q).empty());
}

TEST(Router, RouteConservesAndPreservesOrder) {
    const auto q = sample_query();
    const std::vector<Message> msgs = {msg("1", "napoli"), msg("2", "nothing"), msg("3", "torre del greco"),
                                       msg("4", "x", LatLon{39, 16})};
    MemorySink sink;
    const auto r = route(msgs, q, sink);
    EXPECT_EQ(r.input, 4u);
    EXPECT_EQ(r.routed, 3u);
    EXPECT_EQ(r.dropped, 1u);
    EXPECT_EQ(r.appends, 4u);
    ASSERT_EQ(sink.records.size(), 4u);
    EXPECT_EQ(sink.records[0].second.id, "1");
    EXPECT_EQ(sink.records[1].first, "E1");
    EXPECT_EQ(sink.records[2].first, "E2");
    EXPECT_EQ(r.per_event.at("E2"), 2u);
}

TEST(Router, AgreesWithBruteForce) {
    gen::Rng rng(11);
    const auto q = build_query(gen::random_events(rng, 20, 300));
    const auto msgs = gen::messages_for_query(rng, q, 2000);
    const QueryMatcher matcher(q);
    for (const auto& m : msgs) {
        EXPECT_EQ(matcher.match(m), oracle::brute_force_match(m, q)) << m.text;
    }
}

TEST(Router, ReplayFromFileSkipsMalformedLines) {
    const fs::path dir = fs::temp_directory_path() / "floodwatch_router_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "in.ndjson");
        out << R"({"id":"1","text":"napoli","created_at":"2026-10-10T00:00:00Z"})" << "\n";
        out << "broken\n";
        out << R"({"id":"2","text":"other","created_at":"2026-10-10T00:00:00Z"})" << "\n";
    }
    {
        ReplaySource src((dir / "in.ndjson").string());
        EXPECT_THROW(ReplaySource((dir / "in.ndjson").string()), StageError);
        EventFileSink sink(dir / "state");
        const auto r = route(src, sample_query(), sink);
        EXPECT_EQ(r.input, 2u);
        EXPECT_EQ(r.routed, 1u);
        EXPECT_EQ(src.skipped(), 1u);
        EXPECT_EQ(src.lines_read(), 3u);
    }
    EXPECT_TRUE(fs::exists(dir / "state" / "events" / "E1" / "raw.ndjson"));
    EXPECT_THROW(ReplaySource((dir / "missing.ndjson").string()), Error);
    fs::remove_all(dir);
}

TEST(Router, ReportsMergeAssociatively) {
    RoutingReport a{2, 1, 1, 1, {{"E1", 1}}}, b{3, 3, 0, 4, {{"E1", 2}, {"E2", 2}}};
    a += b;
    EXPECT_EQ(a.input, 5u);
    EXPECT_EQ(a.routed + a.dropped, a.input);
    EXPECT_EQ(a.per_event.at("E1"), 3u);
}

namespace {

struct FailingSink : MessageSink {
    std::size_t left;
    explicit FailingSink(std::size_t n) : left(n) {}
    void append(const std::string&, const Message&) override {
        if (left-- == 0) {
            throw StageError("disk full");
        }
    }
};

}  // namespace

TEST(Router, SinkFailureCarriesPartialReport) {
    const std::vector<Message> msgs = {msg("1", "napoli"), msg("2", "napoli"), msg("3", "napoli")};
    FailingSink sink(2);
    try {
        route(msgs, sample_query(), sink);
        FAIL();
    } catch (const RoutingError& e) {
        EXPECT_EQ(e.partial().appends, 2u);
        EXPECT_EQ(e.partial().routed, 2u);
    }
}
