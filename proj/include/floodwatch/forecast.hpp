#pragma once

#include "floodwatch/common.hpp"

#include <json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace floodwatch {

class AreaSet;
class Gazetteer;

/// One flood-risk signal for a NUTS-2 area.
struct FloodForecast {
    std::string area_id;
    TimePoint issued_at;
    TimePoint peak_time;
    int lead_window_hours = 48;
};

struct TriggerConfig {
    std::int64_t min_population = 80000;
    int post_peak_hold_hours = 48;

    void validate() const;
};

/// A city name used as a stream keyword, with the population that ranks it.
struct CityKeyword {
    std::string text;
    std::int64_t population = 0;

    friend bool operator==(const CityKeyword&, const CityKeyword&) = default;
};

enum class EventStatus { active, stopped };

struct CollectionEvent {
    std::string event_id;
    std::set<std::string> area_ids;
    TimePoint peak_time;
    TimePoint expires_at;
    EventStatus status = EventStatus::active;
    std::vector<CityKeyword> keywords;
    std::vector<BBox> bboxes;
    /// Bumped on every persisted change.
    std::uint64_t version = 1;

    bool active() const { return status == EventStatus::active; }
    friend bool operator==(const CollectionEvent&, const CollectionEvent&) = default;
};

nlohmann::json to_json(const CollectionEvent& e);
CollectionEvent event_from_json(const nlohmann::json& j);

struct RecordError {
    std::size_t line = 0;  ///< 1-based; 0 when not tied to an input line
    std::string message;
};

struct ForecastFeed {
    std::vector<FloodForecast> forecasts;
    std::vector<RecordError> errors;
};

/// Newline-delimited JSON records:
/// {"area_id": "ITF6", "issued_at": "...Z", "peak_time": "...Z", "lead_window_hours": 48}
/// (`lead_window_hours` optional). Bad records are reported and skipped.
ForecastFeed parse_forecast_feed(std::string_view raw);

struct TriggerResult {
    std::vector<CollectionEvent> events;
    std::vector<RecordError> errors;  ///< line = forecast index + 1
    std::size_t created = 0;
    std::size_t extended = 0;
    std::size_t stopped = 0;
    std::size_t stale = 0;  ///< forecasts whose hold window already ended at `now`
};

/// Applies a forecast batch to the event set at simulation time `now`.
/// Events with expires_at <= now are stopped first; then each forecast
/// either extends the active event of its area or opens a new one.
TriggerResult trigger_events(const std::vector<FloodForecast>& forecasts,
                             std::vector<CollectionEvent> existing, const TriggerConfig& cfg,
                             const AreaSet& areas, const Gazetteer& gazetteer, TimePoint now);

/// Moves the peak forward (never backward) and recomputes expiry.
/// Throws Error for a stopped event or a forecast for another area.
CollectionEvent extend_event(const CollectionEvent& event, const FloodForecast& forecast,
                             const TriggerConfig& cfg);

CollectionEvent stop_event(const CollectionEvent& event);

}  // namespace floodwatch
