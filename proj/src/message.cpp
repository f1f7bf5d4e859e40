#include "floodwatch/message.hpp"

namespace floodwatch {

Message message_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw Error("message record must be an object");
    }
    Message m;
    const auto& id = j.at("id");
    m.id = id.is_string() ? id.get<std::string>() : id.dump();
    if (m.id.empty()) {
        throw Error("empty message id");
    }
    m.text = j.at("text").get<std::string>();
    m.created_at = parse_utc(j.at("created_at").get<std::string>());
    const bool has_lat = j.contains("lat") && !j["lat"].is_null();
    const bool has_lon = j.contains("lon") && !j["lon"].is_null();
    if (has_lat != has_lon) {
        throw Error("lat and lon must be given together");
    }
    if (has_lat) {
        LatLon p{j["lat"].get<double>(), j["lon"].get<double>()};
        if (!valid_coordinates(p)) {
            throw Error("coordinates out of range");
        }
        m.coords = p;
    }
    if (j.contains("lang") && !j["lang"].is_null()) {
        m.lang = j["lang"].get<std::string>();
    }
    return m;
}

Message parse_message_line(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad message record: ") + e.what());
    }
    try {
        return message_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad message record: ") + e.what());
    }
}

nlohmann::json to_json(const Message& m) {
    nlohmann::json j{{"id", m.id}, {"text", m.text}, {"created_at", format_utc(m.created_at)}};
    if (m.coords) {
        j["lat"] = m.coords->lat;
        j["lon"] = m.coords->lon;
    }
    if (m.lang) {
        j["lang"] = *m.lang;
    }
    return j;
}

ClassifiedMessage classified_from_json(const nlohmann::json& j) {
    ClassifiedMessage c{message_from_json(j), j.at("confidence").get<double>()};
    if (!(c.confidence >= 0.0 && c.confidence <= 1.0)) {
        throw Error("confidence outside [0, 1] for message " + c.message.id);
    }
    return c;
}

nlohmann::json to_json(const ClassifiedMessage& m) {
    auto j = to_json(m.message);
    j["confidence"] = m.confidence;
    return j;
}

}  // namespace floodwatch
