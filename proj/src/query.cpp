#include "floodwatch/query.hpp"

#include "floodwatch/gazetteer.hpp"
#include "floodwatch/text.hpp"

#include <algorithm>
#include <map>

namespace floodwatch {

void QueryLimits::validate() const {
    if (max_keywords == 0 || max_keyword_bytes == 0 || max_boxes == 0) {
        throw ConfigError("query limits must be positive");
    }
}

nlohmann::json to_json(const StreamQuery& q) {
    auto keywords = nlohmann::json::array();
    for (const auto& k : q.keywords) {
        keywords.push_back({{"text", k.text}, {"population", k.population}, {"owners", k.owners}});
    }
    auto boxes = nlohmann::json::array();
    for (const auto& b : q.boxes) {
        boxes.push_back({{"box", {b.box.min_lat, b.box.min_lon, b.box.max_lat, b.box.max_lon}}, {"owners", b.owners}});
    }
    return {{"keywords", keywords}, {"boxes", boxes}};
}

StreamQuery query_from_json(const nlohmann::json& j) {
    StreamQuery q;
    for (const auto& k : j.at("keywords")) {
        q.keywords.push_back({k.at("text").get<std::string>(), k.value("population", std::int64_t{0}),
                              k.at("owners").get<std::set<std::string>>()});
    }
    for (const auto& b : j.at("boxes")) {
        const auto& v = b.at("box");
        q.boxes.push_back({{v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>(), v.at(3).get<double>()},
                           b.at("owners").get<std::set<std::string>>()});
    }
    return q;
}

CitySelection select_cities(const std::string& area_id, const Gazetteer& gazetteer,
                            const TriggerConfig& cfg, const QueryLimits& limits) {
    std::map<std::string, std::int64_t> best;
    CitySelection out;
    for (const auto& entry : gazetteer.entries()) {
        if (entry.nuts2_id != area_id || entry.population < cfg.min_population) {
            continue;
        }
        for (const auto& name : entry.all_names()) {
            std::string key = text::to_lower(name);
            if (key.empty()) {
                continue;
            }
            if (key.size() >= limits.max_keyword_bytes) {
                out.dropped_too_long.push_back(key);
                continue;
            }
            auto [it, inserted] = best.emplace(key, entry.population);
            if (!inserted) {
                it->second = std::max(it->second, entry.population);
            }
        }
    }
    for (const auto& [name, pop] : best) {
        out.keywords.push_back({name, pop});
    }
    std::stable_sort(out.keywords.begin(), out.keywords.end(),
                     [](const CityKeyword& a, const CityKeyword& b) { return a.population > b.population; });
    return out;
}

double added_envelope_area(const BBox& a, const BBox& b) {
    const double ix = std::max(0.0, std::min(a.max_lat, b.max_lat) - std::max(a.min_lat, b.min_lat));
    const double iy = std::max(0.0, std::min(a.max_lon, b.max_lon) - std::max(a.min_lon, b.min_lon));
    return a.envelope(b).area() - (a.area() + b.area() - ix * iy);
}

StreamQuery build_query(const std::vector<CollectionEvent>& events, const QueryLimits& limits) {
    limits.validate();
    StreamQuery q;

    std::map<std::string, QueryKeyword> merged;
    for (const auto& e : events) {
        if (!e.active()) {
            continue;
        }
        for (const auto& k : e.keywords) {
            std::string key = text::to_lower(k.text);
            if (key.empty() || key.size() >= limits.max_keyword_bytes) {
                continue;
            }
            auto& slot = merged[key];
            if (slot.owners.empty()) {
                slot.text = key;
                slot.population = k.population;
            } else {
                slot.population = std::max(slot.population, k.population);
            }
            slot.owners.insert(e.event_id);
        }
        for (const auto& b : e.bboxes) {
            q.boxes.push_back({b, {e.event_id}});
        }
    }

    for (auto& [key, kw] : merged) {
        q.keywords.push_back(std::move(kw));
    }
    std::sort(q.keywords.begin(), q.keywords.end(), [](const QueryKeyword& a, const QueryKeyword& b) {
        return a.population != b.population ? a.population > b.population : a.text < b.text;
    });
    if (q.keywords.size() > limits.max_keywords) {
        q.keywords.resize(limits.max_keywords);
    }

    while (q.boxes.size() > limits.max_boxes) {
        std::size_t best_i = 0;
        std::size_t best_j = 1;
        double best_cost = added_envelope_area(q.boxes[0].box, q.boxes[1].box);
        for (std::size_t i = 0; i < q.boxes.size(); ++i) {
            for (std::size_t j = i + 1; j < q.boxes.size(); ++j) {
                double cost = added_envelope_area(q.boxes[i].box, q.boxes[j].box);
                if (cost < best_cost) {
                    best_cost = cost;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        QueryBox& keep = q.boxes[best_i];
        keep.box = keep.box.envelope(q.boxes[best_j].box);
        keep.owners.insert(q.boxes[best_j].owners.begin(), q.boxes[best_j].owners.end());
        q.boxes.erase(q.boxes.begin() + static_cast<std::ptrdiff_t>(best_j));
    }
    return q;
}

std::vector<QueryViolation> validate_query(const StreamQuery& q, const QueryLimits& limits) {
    using Kind = QueryViolation::Kind;
    std::vector<QueryViolation> out;
    if (q.keywords.size() > limits.max_keywords) {
        out.push_back({Kind::too_many_keywords, std::to_string(q.keywords.size()) + " keywords"});
    }
    if (q.boxes.size() > limits.max_boxes) {
        out.push_back({Kind::too_many_boxes, std::to_string(q.boxes.size()) + " boxes"});
    }
    for (const auto& k : q.keywords) {
        if (k.text.size() >= limits.max_keyword_bytes) {
            out.push_back({Kind::keyword_too_long, k.text});
        }
        if (k.owners.empty()) {
            out.push_back({Kind::ownerless_keyword, k.text});
        }
    }
    for (std::size_t i = 0; i < q.boxes.size(); ++i) {
        if (q.boxes[i].owners.empty()) {
            out.push_back({Kind::ownerless_box, "box " + std::to_string(i)});
        }
    }
    return out;
}

}  // namespace floodwatch
