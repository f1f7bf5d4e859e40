#pragma once

#include "floodwatch/common.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace floodwatch {

/// One social-media post. Never mutated after parsing.
struct Message {
    std::string id;
    std::string text;
    TimePoint created_at;
    std::optional<LatLon> coords;
    std::optional<std::string> lang;

    friend bool operator==(const Message&, const Message&) = default;
};

/// A message with the classifier's flood-relevance probability.
struct ClassifiedMessage {
    Message message;
    double confidence = 0.0;
};

/// Strict ordering used wherever ties must break deterministically:
/// older first, then by id.
inline bool older_first(const Message& a, const Message& b) {
    return a.created_at != b.created_at ? a.created_at < b.created_at : a.id < b.id;
}

/// Record fields: id, text, created_at, lat, lon (optional pair), lang (optional).
/// Throws Error on malformed records.
Message message_from_json(const nlohmann::json& j);
Message parse_message_line(std::string_view line);
nlohmann::json to_json(const Message& m);

ClassifiedMessage classified_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClassifiedMessage& m);

}  // namespace floodwatch
