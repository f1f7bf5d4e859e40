#pragma once

#include "floodwatch/forecast.hpp"
#include "floodwatch/message.hpp"
#include "floodwatch/query.hpp"
#include "floodwatch/selection.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace floodwatch {

/// On-disk state of a run:
///
///   <root>/query.json
///   <root>/events/<id>/event.json
///   <root>/events/<id>/raw.ndjson              (append-only)
///   <root>/events/<id>/classified.ndjson
///   <root>/events/<id>/aggregates.geojson
///   <root>/events/<id>/representatives.ndjson
///   <root>/events/<id>/report.json
class EventStore {
public:
    explicit EventStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path event_dir(const std::string& id) const;
    std::filesystem::path event_path(const std::string& id) const { return event_dir(id) / "event.json"; }
    std::filesystem::path raw_path(const std::string& id) const { return event_dir(id) / "raw.ndjson"; }
    std::filesystem::path classified_path(const std::string& id) const {
        return event_dir(id) / "classified.ndjson";
    }
    std::filesystem::path aggregates_path(const std::string& id) const {
        return event_dir(id) / "aggregates.geojson";
    }
    std::filesystem::path representatives_path(const std::string& id) const {
        return event_dir(id) / "representatives.ndjson";
    }
    std::filesystem::path report_path(const std::string& id) const { return event_dir(id) / "report.json"; }
    std::filesystem::path query_path() const { return root_ / "query.json"; }

    /// Ids of every stored event, sorted.
    std::vector<std::string> event_ids() const;
    std::vector<CollectionEvent> load_events() const;
    /// Throws ConfigError for an unknown id.
    CollectionEvent load_event(const std::string& id) const;
    /// Writes the record unless it is unchanged. A changed record must carry
    /// a higher version than the stored one (Error otherwise).
    /// Returns true if the file was written.
    bool save_event(const CollectionEvent& event);

    void save_query(const StreamQuery& query);
    std::optional<StreamQuery> load_query() const;

    /// Raw messages of an event in arrival order; a missing file is empty.
    std::vector<Message> read_raw(const std::string& id) const;

    void write_classified(const std::string& id, const std::vector<ClassifiedMessage>& messages);
    std::vector<ClassifiedMessage> read_classified(const std::string& id) const;

    void write_representatives(const std::string& id, const std::vector<RepresentativeTweet>& reps);
    std::vector<RepresentativeTweet> read_representatives(const std::string& id) const;

    void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

private:
    std::filesystem::path root_;
};

/// Replaces `path` with `content` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace floodwatch
