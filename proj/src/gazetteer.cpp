#include "floodwatch/gazetteer.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace floodwatch {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("gazetteer line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

void validate(const GazetteerEntry& e, std::size_t line) {
    auto where = "gazetteer line " + std::to_string(line) + ": ";
    if (e.name.empty()) {
        throw ConfigError(where + "empty name");
    }
    if (!valid_coordinates(e.location)) {
        throw ConfigError(where + "coordinates out of range");
    }
    if (e.population < 0) {
        throw ConfigError(where + "negative population");
    }
    if (e.nuts2_id.empty()) {
        throw ConfigError(where + "empty nuts2_id");
    }
}

}  // namespace

std::vector<std::string> GazetteerEntry::all_names() const {
    std::vector<std::string> names{name};
    names.insert(names.end(), alternate_names.begin(), alternate_names.end());
    return names;
}

Gazetteer::Gazetteer(std::vector<GazetteerEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        validate(entries_[i], i + 1);
    }
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open gazetteer " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Gazetteer Gazetteer::parse(std::string_view content) {
    std::vector<GazetteerEntry> entries;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        std::string_view line = content.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? content.size() : end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (line.starts_with("name\t")) {
                continue;
            }
        }
        auto cols = split(line, '\t');
        if (cols.size() != 6) {
            throw ConfigError("gazetteer line " + std::to_string(line_no) + ": expected 6 columns");
        }
        GazetteerEntry e;
        e.name = cols[0];
        for (auto& alt : split(cols[1], ';')) {
            if (!alt.empty()) {
                e.alternate_names.push_back(alt);
            }
        }
        e.location = {to_double(cols[2], line_no), to_double(cols[3], line_no)};
        e.population = static_cast<std::int64_t>(to_double(cols[4], line_no));
        e.nuts2_id = cols[5];
        validate(e, line_no);
        entries.push_back(std::move(e));
    }
    Gazetteer g;
    g.entries_ = std::move(entries);
    return g;
}

void Gazetteer::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write gazetteer " + path.string());
    }
    out << "name\talternate_names\tlatitude\tlongitude\tpopulation\tnuts2_id\n";
    for (const auto& e : entries_) {
        out << e.name << '\t';
        for (std::size_t i = 0; i < e.alternate_names.size(); ++i) {
            out << (i ? ";" : "") << e.alternate_names[i];
        }
        char lat[32], lon[32];
        *std::to_chars(lat, lat + 31, e.location.lat).ptr = '\0';
        *std::to_chars(lon, lon + 31, e.location.lon).ptr = '\0';
        out << '\t' << lat << '\t' << lon << '\t' << e.population << '\t' << e.nuts2_id << '\n';
    }
}

}  // namespace floodwatch
