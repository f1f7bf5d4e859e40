#pragma once

// Seeded random inputs shared by the unit and acceptance tests.

#include "floodwatch/embeddings.hpp"
#include "floodwatch/forecast.hpp"
#include "floodwatch/gazetteer.hpp"
#include "floodwatch/geometry.hpp"
#include "floodwatch/message.hpp"
#include "floodwatch/query.hpp"

#include <random>
#include <string>
#include <vector>

namespace gen {

using namespace floodwatch;
using Rng = std::mt19937_64;

/// Code points drawn from ASCII, Latin-1, Greek, CJK, combining marks and emoji.
std::u32string unicode_string(Rng& rng, std::size_t max_len);

/// `s` with a few random edits (for near pairs).
std::u32string mutate(Rng& rng, std::u32string s, std::size_t edits);

/// Star-shaped simple ring around a center.
Ring star_ring(Rng& rng, LatLon center, double r_min, double r_max, std::size_t vertices);

/// Random NUTS-like areas; some with holes or a second part.
std::vector<Area> random_areas(Rng& rng, std::size_t count);

/// Random event set for the query builder (up to `max_events` events and
/// `max_keywords` candidate keywords in total).
std::vector<CollectionEvent> random_events(Rng& rng, std::size_t max_events, std::size_t max_keywords);

/// Messages that hit, miss or partly hit the query's keywords and boxes.
std::vector<Message> messages_for_query(Rng& rng, const StreamQuery& query, std::size_t n);

/// Agnostic table over `vocab` with normal(0, 0.5) components.
EmbeddingTable random_table(Rng& rng, const std::vector<std::string>& vocab, std::size_t dim);

TimePoint base_time();

}  // namespace gen
