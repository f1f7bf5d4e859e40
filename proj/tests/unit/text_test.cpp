#include "floodwatch/common.hpp"
#include "floodwatch/gazetteer.hpp"
#include "floodwatch/message.hpp"
#include "floodwatch/text.hpp"

#include <gtest/gtest.h>

using namespace floodwatch;

TEST(Time, ParsesAndFormatsUtc) {
    const auto t = parse_utc("2026-10-11T12:30:00Z");
    EXPECT_EQ(format_utc(t), "2026-10-11T12:30:00Z");
    EXPECT_EQ(parse_utc("2026-10-11T12:30Z"), t);
    EXPECT_EQ(parse_utc("2026-10-11T12:30:00.750+00:00"), t);
    EXPECT_THROW(parse_utc("2026-10-11 12:30:00"), ConfigError);
    EXPECT_THROW(parse_utc("2026-13-11T12:30:00Z"), ConfigError);
    EXPECT_THROW(parse_utc("2026-10-11T12:30:00+02:00"), ConfigError);
}

TEST(Text, TokenizeLowercasesAndSplits) {
    const auto t = text::tokenize("Alluvione a NAPOLI, strade #Allagate!");
    const std::vector<std::string> want{"alluvione", "a", "napoli", "strade", "allagate"};
    EXPECT_EQ(t, want);
}

TEST(Text, TokenizeReplacesUrlsAndMentions) {
    const auto t = text::tokenize("@Protezione see https://t.co/x1 and www.example.org now");
    const std::vector<std::string> want{"<user>", "see", "<url>", "and", "<url>", "now"};
    EXPECT_EQ(t, want);
}

TEST(Text, UnicodeLowercaseAndCount) {
    EXPECT_EQ(text::to_lower("CITTÀ ÜBER"), "città über");
    EXPECT_EQ(text::code_point_count("città"), 5u);
    EXPECT_EQ(text::decode_utf8("\xff"), std::u32string(1, U'�'));
    const std::u32string s = U"a\U0001F30Az";
    EXPECT_EQ(text::decode_utf8(text::encode_utf8(s)), s);
}

TEST(Text, NormalizeForSimilarity) {
    EXPECT_EQ(text::normalize_for_similarity("  Flood   IN\tNapoli http://x.y/z  "), U"flood in napoli <url>");
}

TEST(Text, PhraseIndexWholeWords) {
    text::PhraseIndex idx;
    ASSERT_TRUE(idx.add("Lamezia Terme", 0));
    ASSERT_TRUE(idx.add("terme", 1));
    EXPECT_FALSE(idx.add("  ,, ", 2));
    const auto hits = idx.find_all(text::tokenize("Flood at lamezia terme and Termes"));
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(idx.length(0), 2u);
}

TEST(Message, JsonRoundTrip) {
    Message m{"1", "Acqua alta", parse_utc("2026-10-10T10:00:00Z"), LatLon{40.8, 14.2}, std::string("it")};
    EXPECT_EQ(message_from_json(to_json(m)), m);
    const auto bare = parse_message_line(R"({"id":"2","text":"x","created_at":"2026-10-10T10:00:00Z"})");
    EXPECT_FALSE(bare.coords);
    EXPECT_FALSE(bare.lang);
}

TEST(Message, RejectsBadRecords) {
    EXPECT_THROW(parse_message_line(R"({"id":"2","text":"x"})"), Error);
    EXPECT_THROW(parse_message_line(R"({"id":"2","text":"x","created_at":"2026-10-10T10:00:00Z","lat":1})"), Error);
    EXPECT_THROW(parse_message_line(R"({"id":"2","text":"x","created_at":"2026-10-10T10:00:00Z","lat":91,"lon":0})"),
                 Error);
    EXPECT_THROW(parse_message_line("not json"), Error);
    EXPECT_THROW(classified_from_json({{"id", "1"}, {"text", "x"}, {"created_at", "2026-10-10T10:00:00Z"},
                                       {"confidence", 1.5}}),
                 Error);
}

TEST(Message, OlderFirstBreaksTiesById) {
    const auto t = parse_utc("2026-10-10T10:00:00Z");
    Message a{"a", "", t, {}, {}}, b{"b", "", t, {}, {}}, c{"0", "", t - std::chrono::seconds(1), {}, {}};
    EXPECT_TRUE(older_first(a, b));
    EXPECT_TRUE(older_first(c, a));
    EXPECT_FALSE(older_first(a, a));
}

TEST(Gazetteer, ParsesTsv) {
    const auto g = Gazetteer::parse(
        "name\talternate_names\tlatitude\tlongitude\tpopulation\tnuts2_id\n"
        "# comment\n"
        "Napoli\tNaples;Neapel\t40.85\t14.27\t914000\tITF3\n"
        "Catanzaro\t\t38.91\t16.59\t86000\tITF6\n");
    ASSERT_EQ(g.entries().size(), 2u);
    EXPECT_EQ(g.entries()[0].all_names(), (std::vector<std::string>{"Napoli", "Naples", "Neapel"}));
    EXPECT_EQ(g.entries()[1].population, 86000);
    EXPECT_THROW(Gazetteer::parse("name\talternate_names\tlatitude\tlongitude\tpopulation\tnuts2_id\nX\t\t99\t0\t1\tAB12\n"),
                 ConfigError);
}
