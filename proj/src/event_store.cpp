#include "floodwatch/event_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace floodwatch {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file_atomic(const fs::path& path, const std::string& content) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw StageError("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw StageError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        throw StageError("cannot replace " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StageError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

template <typename F>
void for_each_line(const fs::path& path, F&& f) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return;
    }
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        try {
            f(json::parse(line));
        } catch (const json::exception& e) {
            throw StageError(path.string() + ":" + std::to_string(n) + ": " + e.what());
        } catch (const Error& e) {
            throw StageError(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
}

}  // namespace

EventStore::EventStore(fs::path root) : root_(std::move(root)) {}

fs::path EventStore::event_dir(const std::string& id) const {
    if (id.empty() || id.find('/') != std::string::npos || id == "." || id == "..") {
        throw ConfigError("invalid event id '" + id + "'");
    }
    return root_ / "events" / id;
}

std::vector<std::string> EventStore::event_ids() const {
    std::vector<std::string> ids;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(root_ / "events", ec)) {
        if (entry.is_directory() && fs::exists(entry.path() / "event.json")) {
            ids.push_back(entry.path().filename().string());
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<CollectionEvent> EventStore::load_events() const {
    std::vector<CollectionEvent> events;
    for (const auto& id : event_ids()) {
        events.push_back(load_event(id));
    }
    return events;
}

CollectionEvent EventStore::load_event(const std::string& id) const {
    const auto path = event_path(id);
    if (!fs::exists(path)) {
        throw ConfigError("unknown event " + id);
    }
    try {
        return event_from_json(json::parse(read_file(path)));
    } catch (const json::exception& e) {
        throw StageError("corrupt event record " + path.string() + ": " + e.what());
    }
}

bool EventStore::save_event(const CollectionEvent& event) {
    const auto path = event_path(event.event_id);
    if (fs::exists(path)) {
        const CollectionEvent stored = load_event(event.event_id);
        if (stored == event) {
            return false;
        }
        if (event.version <= stored.version) {
            throw Error("event " + event.event_id + " version " + std::to_string(event.version) +
                        " does not exceed stored version " + std::to_string(stored.version));
        }
    }
    write_file_atomic(path, to_json(event).dump(2) + "\n");
    return true;
}

void EventStore::save_query(const StreamQuery& query) {
    write_file_atomic(query_path(), to_json(query).dump(2) + "\n");
}

std::optional<StreamQuery> EventStore::load_query() const {
    if (!fs::exists(query_path())) {
        return std::nullopt;
    }
    try {
        return query_from_json(json::parse(read_file(query_path())));
    } catch (const json::exception& e) {
        throw StageError("corrupt query " + query_path().string() + ": " + e.what());
    }
}

std::vector<Message> EventStore::read_raw(const std::string& id) const {
    std::vector<Message> out;
    for_each_line(raw_path(id), [&](const json& j) { out.push_back(message_from_json(j)); });
    return out;
}

void EventStore::write_classified(const std::string& id, const std::vector<ClassifiedMessage>& messages) {
    std::string content;
    for (const auto& m : messages) {
        content += to_json(m).dump();
        content += '\n';
    }
    write_file_atomic(classified_path(id), content);
}

std::vector<ClassifiedMessage> EventStore::read_classified(const std::string& id) const {
    if (!fs::exists(classified_path(id))) {
        throw StageError("event " + id + " has not been classified");
    }
    std::vector<ClassifiedMessage> out;
    for_each_line(classified_path(id), [&](const json& j) { out.push_back(classified_from_json(j)); });
    return out;
}

void EventStore::write_representatives(const std::string& id, const std::vector<RepresentativeTweet>& reps) {
    std::string content;
    for (const auto& r : reps) {
        content += to_json(r).dump();
        content += '\n';
    }
    write_file_atomic(representatives_path(id), content);
}

std::vector<RepresentativeTweet> EventStore::read_representatives(const std::string& id) const {
    std::vector<RepresentativeTweet> out;
    for_each_line(representatives_path(id), [&](const json& j) { out.push_back(representative_from_json(j)); });
    return out;
}

void EventStore::write_json(const fs::path& path, const json& doc) {
    write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace floodwatch
