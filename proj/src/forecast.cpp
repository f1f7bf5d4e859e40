#include "floodwatch/forecast.hpp"

#include "floodwatch/gazetteer.hpp"
#include "floodwatch/geometry.hpp"
#include "floodwatch/query.hpp"

#include <algorithm>
#include <map>

namespace floodwatch {

void TriggerConfig::validate() const {
    if (min_population <= 0) {
        throw ConfigError("min_population must be positive");
    }
    if (post_peak_hold_hours <= 0) {
        throw ConfigError("post_peak_hold_hours must be positive");
    }
}

nlohmann::json to_json(const CollectionEvent& e) {
    auto keywords = nlohmann::json::array();
    for (const auto& k : e.keywords) {
        keywords.push_back({{"text", k.text}, {"population", k.population}});
    }
    auto boxes = nlohmann::json::array();
    for (const auto& b : e.bboxes) {
        boxes.push_back({b.min_lat, b.min_lon, b.max_lat, b.max_lon});
    }
    return {{"event_id", e.event_id},
            {"area_ids", e.area_ids},
            {"peak_time", format_utc(e.peak_time)},
            {"expires_at", format_utc(e.expires_at)},
            {"status", e.active() ? "active" : "stopped"},
            {"keywords", keywords},
            {"bboxes", boxes},
            {"version", e.version}};
}

CollectionEvent event_from_json(const nlohmann::json& j) {
    CollectionEvent e;
    e.event_id = j.at("event_id").get<std::string>();
    e.area_ids = j.at("area_ids").get<std::set<std::string>>();
    e.peak_time = parse_utc(j.at("peak_time").get<std::string>());
    e.expires_at = parse_utc(j.at("expires_at").get<std::string>());
    const auto status = j.at("status").get<std::string>();
    if (status != "active" && status != "stopped") {
        throw ConfigError("bad event status " + status);
    }
    e.status = status == "active" ? EventStatus::active : EventStatus::stopped;
    for (const auto& k : j.at("keywords")) {
        e.keywords.push_back({k.at("text").get<std::string>(), k.at("population").get<std::int64_t>()});
    }
    for (const auto& b : j.at("bboxes")) {
        e.bboxes.push_back({b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()});
    }
    e.version = j.value("version", std::uint64_t{1});
    if (e.area_ids.empty()) {
        throw ConfigError("event " + e.event_id + " has no areas");
    }
    return e;
}

ForecastFeed parse_forecast_feed(std::string_view raw) {
    ForecastFeed feed;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < raw.size()) {
        std::size_t end = raw.find('\n', start);
        std::string_view line = raw.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? raw.size() : end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            continue;
        }
        try {
            auto j = nlohmann::json::parse(line);
            FloodForecast f;
            f.area_id = j.at("area_id").get<std::string>();
            f.issued_at = parse_utc(j.at("issued_at").get<std::string>());
            f.peak_time = parse_utc(j.at("peak_time").get<std::string>());
            f.lead_window_hours = j.value("lead_window_hours", 48);
            if (!is_nuts2_code(f.area_id)) {
                throw Error("area_id '" + f.area_id + "' is not a NUTS-2 code");
            }
            if (f.lead_window_hours <= 0) {
                throw Error("lead_window_hours must be positive");
            }
            if (f.peak_time < f.issued_at) {
                throw Error("peak_time before issued_at");
            }
            if (f.peak_time - f.issued_at > Hours{f.lead_window_hours}) {
                throw Error("peak_time beyond the forecast lead window");
            }
            feed.forecasts.push_back(std::move(f));
        } catch (const std::exception& e) {
            feed.errors.push_back({line_no, e.what()});
        }
    }
    return feed;
}

CollectionEvent extend_event(const CollectionEvent& event, const FloodForecast& forecast,
                             const TriggerConfig& cfg) {
    if (!event.active()) {
        throw Error("event " + event.event_id + " is stopped; open a new event instead");
    }
    if (!event.area_ids.contains(forecast.area_id)) {
        throw Error("forecast area " + forecast.area_id + " is not covered by event " + event.event_id);
    }
    if (forecast.peak_time <= event.peak_time) {
        return event;
    }
    CollectionEvent out = event;
    out.peak_time = forecast.peak_time;
    out.expires_at = forecast.peak_time + Hours{cfg.post_peak_hold_hours};
    ++out.version;
    return out;
}

CollectionEvent stop_event(const CollectionEvent& event) {
    if (!event.active()) {
        return event;
    }
    CollectionEvent out = event;
    out.status = EventStatus::stopped;
    ++out.version;
    return out;
}

namespace {

std::string compact_time(TimePoint t) {
    std::string s = format_utc(t);  // YYYY-MM-DDTHH:MM:SSZ
    std::string out;
    for (char c : s.substr(0, 16)) {
        if (c != '-' && c != ':') {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace

TriggerResult trigger_events(const std::vector<FloodForecast>& forecasts,
                             std::vector<CollectionEvent> existing, const TriggerConfig& cfg,
                             const AreaSet& areas, const Gazetteer& gazetteer, TimePoint now) {
    cfg.validate();
    TriggerResult result;
    result.events = std::move(existing);

    for (auto& e : result.events) {
        if (e.active() && now >= e.expires_at) {
            e = stop_event(e);
            ++result.stopped;
        }
    }

    std::set<std::string> ids;
    for (const auto& e : result.events) {
        ids.insert(e.event_id);
    }
    auto active_for = [&](const std::string& area) -> CollectionEvent* {
        for (auto& e : result.events) {
            if (e.active() && e.area_ids.contains(area)) {
                return &e;
            }
        }
        return nullptr;
    };

    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        const auto& f = forecasts[i];
        const Area* area = areas.find(f.area_id);
        if (area == nullptr) {
            result.errors.push_back({i + 1, "unknown area " + f.area_id});
            continue;
        }
        if (CollectionEvent* e = active_for(f.area_id)) {
            CollectionEvent updated = extend_event(*e, f, cfg);
            if (updated.version != e->version) {
                *e = std::move(updated);
                ++result.extended;
            }
            continue;
        }
        const TimePoint expiry = f.peak_time + Hours{cfg.post_peak_hold_hours};
        if (expiry <= now) {
            ++result.stale;
            continue;
        }
        CollectionEvent e;
        std::string base = f.area_id + "-" + compact_time(f.issued_at);
        e.event_id = base;
        for (int n = 2; ids.contains(e.event_id); ++n) {
            e.event_id = base + "-" + std::to_string(n);
        }
        ids.insert(e.event_id);
        e.area_ids = {f.area_id};
        e.peak_time = f.peak_time;
        e.expires_at = expiry;
        e.keywords = select_cities(f.area_id, gazetteer, cfg).keywords;
        e.bboxes = {area->envelope};
        result.events.push_back(std::move(e));
        ++result.created;
    }
    return result;
}

}  // namespace floodwatch
