#include "floodwatch/common.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace floodwatch {

namespace {

int take_digits(std::string_view s, std::size_t& pos, std::size_t n) {
    if (pos + n > s.size()) {
        throw ConfigError("truncated timestamp");
    }
    int v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        char c = s[pos + i];
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ConfigError("non-digit in timestamp");
        }
        v = v * 10 + (c - '0');
    }
    pos += n;
    return v;
}

void expect(std::string_view s, std::size_t& pos, char c) {
    if (pos >= s.size() || s[pos] != c) {
        throw ConfigError(std::string("expected '") + c + "' in timestamp");
    }
    ++pos;
}

}  // namespace

TimePoint parse_utc(std::string_view text) {
    try {
        std::size_t pos = 0;
        int y = take_digits(text, pos, 4);
        expect(text, pos, '-');
        unsigned mo = static_cast<unsigned>(take_digits(text, pos, 2));
        expect(text, pos, '-');
        unsigned d = static_cast<unsigned>(take_digits(text, pos, 2));
        expect(text, pos, 'T');
        int hh = take_digits(text, pos, 2);
        expect(text, pos, ':');
        int mm = take_digits(text, pos, 2);
        int ss = 0;
        if (pos < text.size() && text[pos] == ':') {
            ++pos;
            ss = take_digits(text, pos, 2);
            if (pos < text.size() && text[pos] == '.') {
                ++pos;
                std::size_t start = pos;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                    ++pos;
                }
                if (pos == start) {
                    throw ConfigError("empty fraction");
                }
            }
        }
        std::string_view zone = text.substr(pos);
        if (zone != "Z" && zone != "+00:00") {
            throw ConfigError("timestamp must be UTC");
        }
        std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{d}};
        if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) {
            throw ConfigError("timestamp out of range");
        }
        return std::chrono::sys_days{ymd} + std::chrono::hours{hh} + std::chrono::minutes{mm} +
               std::chrono::seconds{ss};
    } catch (const ConfigError& e) {
        throw ConfigError("bad timestamp '" + std::string(text) + "': " + e.what());
    }
}

std::string format_utc(TimePoint t) {
    auto day = std::chrono::floor<std::chrono::days>(t);
    std::chrono::year_month_day ymd{day};
    std::chrono::hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

bool valid_coordinates(const LatLon& p) {
    return p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

BBox BBox::envelope(const BBox& other) const {
    return {std::min(min_lat, other.min_lat), std::min(min_lon, other.min_lon),
            std::max(max_lat, other.max_lat), std::max(max_lon, other.max_lon)};
}

}  // namespace floodwatch
