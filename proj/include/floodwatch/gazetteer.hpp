#pragma once

#include "floodwatch/common.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace floodwatch {

struct GazetteerEntry {
    std::string name;
    std::vector<std::string> alternate_names;
    LatLon location;
    std::int64_t population = 0;
    std::string nuts2_id;

    /// Canonical name first, then alternates in file order.
    std::vector<std::string> all_names() const;
};

/// Place-name table. File format: tab-separated with a header row
/// `name  alternate_names  latitude  longitude  population  nuts2_id`,
/// alternates separated by ';'. Lines starting with '#' are ignored.
class Gazetteer {
public:
    Gazetteer() = default;
    explicit Gazetteer(std::vector<GazetteerEntry> entries);

    static Gazetteer load(const std::filesystem::path& path);
    static Gazetteer parse(std::string_view content);
    void save(const std::filesystem::path& path) const;

    const std::vector<GazetteerEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<GazetteerEntry> entries_;
};

}  // namespace floodwatch
