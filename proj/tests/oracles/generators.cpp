#include "generators.hpp"

#include "floodwatch/text.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gen {

namespace {

const std::vector<std::pair<char32_t, char32_t>> kRanges = {
    {0x61, 0x7A},     // a-z
    {0x41, 0x5A},     // A-Z
    {0x30, 0x39},     // digits
    {0x20, 0x20},     // space
    {0xE0, 0xFF},     // Latin-1 letters
    {0x3B1, 0x3C9},   // Greek
    {0x4E00, 0x4E2F}, // CJK
    {0x300, 0x30F},   // combining marks
    {0x1F300, 0x1F30F},  // emoji (astral)
};

const std::vector<std::string> kWords = {"acqua", "fiume", "ponte", "strada", "oggi", "rain",  "storm", "city",
                                         "the",   "and",   "near",  "über",   "città", "niño",  "straße", "é",
                                         "river", "water", "road",  "now",    "help",  "today", "people"};

std::string pick(Rng& rng, const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

std::string random_name(Rng& rng) {
    const int words = std::uniform_int_distribution<int>(1, 3)(rng);
    std::string s;
    for (int i = 0; i < words; ++i) {
        if (i) {
            s += ' ';
        }
        s += pick(rng, kWords);
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
            s += std::to_string(std::uniform_int_distribution<int>(0, 99)(rng));
        }
    }
    return s;
}

}  // namespace

TimePoint base_time() {
    return parse_utc("2026-01-01T00:00:00Z");
}

std::u32string unicode_string(Rng& rng, std::size_t max_len) {
    const std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
    // Narrow alphabets make long common runs; wide ones make mismatches.
    const std::size_t alphabet = std::uniform_int_distribution<std::size_t>(1, kRanges.size())(rng);
    std::u32string s;
    for (std::size_t i = 0; i < len; ++i) {
        const auto& [lo, hi] = kRanges[std::uniform_int_distribution<std::size_t>(0, alphabet - 1)(rng)];
        const char32_t top = std::min<char32_t>(hi, lo + 3 + static_cast<char32_t>(alphabet * 3));
        s += static_cast<char32_t>(std::uniform_int_distribution<std::uint32_t>(lo, top)(rng));
    }
    return s;
}

std::u32string mutate(Rng& rng, std::u32string s, std::size_t edits) {
    for (std::size_t e = 0; e < edits; ++e) {
        const int op = std::uniform_int_distribution<int>(0, 2)(rng);
        const char32_t c = static_cast<char32_t>(std::uniform_int_distribution<std::uint32_t>(0x61, 0x7A)(rng));
        if (op == 0 || s.empty()) {
            s.insert(s.begin() + std::uniform_int_distribution<std::size_t>(0, s.size())(rng), c);
        } else if (op == 1) {
            s.erase(s.begin() + std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng));
        } else {
            s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)] = c;
        }
    }
    return s;
}

Ring star_ring(Rng& rng, LatLon center, double r_min, double r_max, std::size_t vertices) {
    std::vector<double> angles;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < vertices; ++i) {
        angles.push_back(angle(rng));
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    std::uniform_real_distribution<double> radius(r_min, r_max);
    Ring r;
    for (double a : angles) {
        const double d = radius(rng);
        r.push_back({center.lat + d * std::sin(a), center.lon + d * std::cos(a)});
    }
    return r;
}

std::vector<Area> random_areas(Rng& rng, std::size_t count) {
    std::vector<Area> areas;
    std::uniform_real_distribution<double> lat(-50.0, 50.0), lon(-150.0, 150.0);
    for (std::size_t i = 0; i < count; ++i) {
        Area a;
        a.nuts_id = std::string("Q") + static_cast<char>('A' + i % 26) + std::to_string(10 + i % 90).substr(0, 2);
        const LatLon c{lat(rng), lon(rng)};
        const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 24)(rng);
        Polygon p{star_ring(rng, c, 2.0, 8.0, n), {}};
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
            p.holes.push_back(star_ring(rng, c, 0.3, 1.8, std::uniform_int_distribution<std::size_t>(3, 8)(rng)));
        }
        a.parts.push_back(std::move(p));
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
            const LatLon c2{c.lat + 20.0, c.lon + 20.0};
            a.parts.push_back({star_ring(rng, c2, 0.5, 3.0, std::uniform_int_distribution<std::size_t>(3, 10)(rng)), {}});
        }
        areas.push_back(std::move(a));
    }
    return areas;
}

std::vector<CollectionEvent> random_events(Rng& rng, std::size_t max_events, std::size_t max_keywords) {
    const std::size_t n_events = std::uniform_int_distribution<std::size_t>(0, max_events)(rng);
    const std::size_t n_keywords = std::uniform_int_distribution<std::size_t>(0, max_keywords)(rng);
    std::vector<CollectionEvent> events(n_events);
    std::uniform_real_distribution<double> lat(-60.0, 60.0), lon(-170.0, 170.0), size(0.01, 5.0);
    for (std::size_t i = 0; i < n_events; ++i) {
        auto& e = events[i];
        e.event_id = "EV" + std::to_string(i);
        e.area_ids = {"AA" + std::to_string(10 + i % 90)};
        e.peak_time = base_time();
        e.expires_at = base_time() + Hours{48};
        e.status = std::uniform_int_distribution<int>(0, 9)(rng) == 0 ? EventStatus::stopped : EventStatus::active;
        const int boxes = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int b = 0; b < boxes; ++b) {
            const double la = lat(rng), lo = lon(rng);
            e.bboxes.push_back({la, lo, la + size(rng), lo + size(rng)});
        }
    }
    if (events.empty()) {
        return events;
    }
    for (std::size_t k = 0; k < n_keywords; ++k) {
        auto& e = events[std::uniform_int_distribution<std::size_t>(0, n_events - 1)(rng)];
        std::string text;
        const int kind = std::uniform_int_distribution<int>(0, 9)(rng);
        if (kind == 0) {
            // Long names straddling the byte limit, some multi-byte.
            const std::size_t len = std::uniform_int_distribution<std::size_t>(50, 70)(rng);
            while (text.size() < len) {
                text += std::uniform_int_distribution<int>(0, 4)(rng) == 0 ? "à" : "x";
            }
        } else {
            text = random_name(rng);
        }
        if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) {
            text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
        }
        e.keywords.push_back({text, std::uniform_int_distribution<std::int64_t>(0, 500000)(rng)});
    }
    return events;
}

std::vector<Message> messages_for_query(Rng& rng, const StreamQuery& query, std::size_t n) {
    std::vector<Message> out;
    std::uniform_int_distribution<int> coin(0, 9);
    for (std::size_t i = 0; i < n; ++i) {
        Message m;
        m.id = "msg" + std::to_string(i);
        m.created_at = base_time() + std::chrono::seconds(i);
        std::vector<std::string> parts;
        const int words = std::uniform_int_distribution<int>(0, 6)(rng);
        for (int w = 0; w < words; ++w) {
            parts.push_back(pick(rng, kWords));
        }
        if (!query.keywords.empty() && coin(rng) < 4) {
            const auto& kw = query.keywords[std::uniform_int_distribution<std::size_t>(0, query.keywords.size() - 1)(rng)];
            std::string k = kw.text;
            switch (coin(rng)) {
                case 0: k = "#" + k; break;
                case 1: k = "@" + k; break;  // mentions must not match
                case 2: k = "https://" + k; break;  // nor URLs
                case 3: k += "s"; break;  // nor partial words
                case 4: k = text::to_lower(k) + ","; break;
                case 5: std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return std::toupper(c); }); break;
                default: break;
            }
            parts.insert(parts.begin() + std::uniform_int_distribution<std::size_t>(0, parts.size())(rng), k);
        }
        for (std::size_t p = 0; p < parts.size(); ++p) {
            m.text += (p ? " " : "") + parts[p];
        }
        if (coin(rng) < 4) {
            if (!query.boxes.empty() && coin(rng) < 6) {
                const auto& b = query.boxes[std::uniform_int_distribution<std::size_t>(0, query.boxes.size() - 1)(rng)].box;
                if (coin(rng) == 0) {
                    m.coords = LatLon{b.min_lat, b.max_lon};  // corner: inclusive
                } else {
                    m.coords = LatLon{std::uniform_real_distribution<double>(b.min_lat, b.max_lat)(rng),
                                      std::uniform_real_distribution<double>(b.min_lon, b.max_lon)(rng)};
                }
            } else {
                m.coords = LatLon{std::uniform_real_distribution<double>(-89.0, 89.0)(rng),
                                  std::uniform_real_distribution<double>(-179.0, 179.0)(rng)};
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

EmbeddingTable random_table(Rng& rng, const std::vector<std::string>& vocab, std::size_t dim) {
    EmbeddingTable t(dim);
    std::normal_distribution<double> normal(0.0, 0.5);
    std::vector<double> v(dim);
    for (const auto& w : vocab) {
        for (auto& x : v) {
            x = normal(rng);
        }
        t.set(w, v);
    }
    return t;
}

}  // namespace gen
