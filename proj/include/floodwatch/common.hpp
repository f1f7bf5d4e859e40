#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>

namespace floodwatch {

using TimePoint = std::chrono::sys_seconds;
using Hours = std::chrono::hours;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input files, bad arguments, broken preconditions in configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A pipeline stage could not complete.
class StageError : public Error {
public:
    using Error::Error;
};

/// Parses "YYYY-MM-DDTHH:MM[:SS[.frac]]" followed by "Z" or "+00:00".
/// Fractional seconds are truncated. Throws ConfigError on anything else.
TimePoint parse_utc(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_utc(TimePoint t);

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const LatLon&, const LatLon&) = default;
};

bool valid_coordinates(const LatLon& p);

/// Axis-aligned lat/lon rectangle, inclusive on every edge.
struct BBox {
    double min_lat = 0.0;
    double min_lon = 0.0;
    double max_lat = 0.0;
    double max_lon = 0.0;

    bool contains(const LatLon& p) const {
        return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
    }
    double area() const { return (max_lat - min_lat) * (max_lon - min_lon); }
    BBox envelope(const BBox& other) const;

    friend bool operator==(const BBox&, const BBox&) = default;
    friend auto operator<=>(const BBox&, const BBox&) = default;
};

}  // namespace floodwatch
