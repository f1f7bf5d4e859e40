#include "floodwatch/scenario.hpp"

#include "floodwatch/cnn.hpp"
#include "floodwatch/config.hpp"
#include "floodwatch/embeddings.hpp"
#include "floodwatch/event_store.hpp"
#include "floodwatch/message.hpp"
#include "floodwatch/training.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>

namespace floodwatch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using WordPairs = std::vector<std::pair<std::string, std::string>>;

const WordPairs kFlood = {
    {"flood", "alluvione"},      {"flooding", "allagamento"}, {"water", "acqua"},
    {"river", "fiume"},          {"overflowing", "esondato"}, {"evacuated", "evacuati"},
    {"rain", "pioggia"},         {"storm", "tempesta"},       {"submerged", "sommerse"},
    {"emergency", "emergenza"},  {"rescue", "soccorso"},      {"mud", "fango"},
    {"bridge", "ponte"},         {"collapsed", "crollato"},   {"alert", "allerta"},
    {"firefighters", "pompieri"}, {"landslide", "frana"},     {"damage", "danni"},
};

const WordPairs kNeutral = {
    {"football", "calcio"}, {"match", "partita"},      {"concert", "concerto"}, {"music", "musica"},
    {"holiday", "vacanza"}, {"beach", "spiaggia"},     {"coffee", "caffè"},     {"movie", "film"},
    {"love", "amore"},      {"happy", "felice"},       {"birthday", "compleanno"}, {"team", "squadra"},
    {"goal", "gol"},        {"sunday", "domenica"},    {"dinner", "cena"},      {"friends", "amici"},
    {"sun", "sole"},        {"summer", "estate"},
};

const WordPairs kFiller = {
    {"the", "il"},     {"and", "e"},      {"near", "vicino"},  {"today", "oggi"},  {"now", "ora"},
    {"city", "città"}, {"people", "gente"}, {"street", "via"}, {"all", "tutti"},   {"very", "molto"},
    {"again", "ancora"}, {"big", "grande"}, {"after", "dopo"}, {"our", "nostra"}, {"center", "centro"},
};

/// Indices into toy_word_pairs() for one sentence.
std::vector<std::size_t> toy_sentence(std::mt19937_64& rng, bool positive) {
    const std::size_t flood0 = 0;
    const std::size_t neutral0 = kFlood.size();
    const std::size_t filler0 = neutral0 + kNeutral.size();
    std::uniform_int_distribution<int> content_count(2, 4);
    std::uniform_int_distribution<int> filler_count(1, 4);
    std::vector<std::size_t> words;
    const int k = content_count(rng);
    for (int i = 0; i < k; ++i) {
        if (positive) {
            words.push_back(flood0 + std::uniform_int_distribution<std::size_t>(0, kFlood.size() - 1)(rng));
        } else {
            words.push_back(neutral0 + std::uniform_int_distribution<std::size_t>(0, kNeutral.size() - 1)(rng));
        }
    }
    const int f = filler_count(rng);
    for (int i = 0; i < f; ++i) {
        words.push_back(filler0 + std::uniform_int_distribution<std::size_t>(0, kFiller.size() - 1)(rng));
    }
    std::shuffle(words.begin(), words.end(), rng);
    return words;
}

std::string render(const std::vector<std::size_t>& words, bool italian) {
    const auto& pairs = toy_word_pairs();
    std::string s;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) {
            s += ' ';
        }
        s += italian ? pairs[words[i]].second : pairs[words[i]].first;
    }
    return s;
}

Ring ring(std::initializer_list<std::pair<double, double>> pts) {
    Ring r;
    for (const auto& [lat, lon] : pts) {
        r.push_back({lat, lon});
    }
    return r;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& toy_word_pairs() {
    static const WordPairs all = [] {
        WordPairs v = kFlood;
        v.insert(v.end(), kNeutral.begin(), kNeutral.end());
        v.insert(v.end(), kFiller.begin(), kFiller.end());
        return v;
    }();
    return all;
}

std::string translate_toy_sentence(const std::string& en) {
    static const std::unordered_map<std::string, std::string> dict = [] {
        std::unordered_map<std::string, std::string> d;
        for (const auto& [a, b] : toy_word_pairs()) {
            d.emplace(a, b);
        }
        return d;
    }();
    std::string out;
    std::size_t pos = 0;
    while (pos <= en.size()) {
        std::size_t end = en.find(' ', pos);
        if (end == std::string::npos) {
            end = en.size();
        }
        const std::string word = en.substr(pos, end - pos);
        auto it = dict.find(word);
        if (!out.empty()) {
            out += ' ';
        }
        out += it == dict.end() ? word : it->second;
        pos = end + 1;
    }
    return out;
}

ToyCorpus make_toy_corpus(std::size_t items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ToyCorpus c;
    c.en.provenance = "toy corpus (en)";
    c.it.provenance = "toy corpus (it)";
    std::set<std::string> seen;
    std::size_t attempts = 0;
    while (c.en.size() < items) {
        if (++attempts > items * 1000 + 1000) {
            throw Error("toy corpus vocabulary too small for " + std::to_string(items) + " distinct items");
        }
        const bool positive = c.en.size() % 2 == 0;
        const auto words = toy_sentence(rng, positive);
        std::string en = render(words, false);
        if (!seen.insert(en).second) {
            continue;
        }
        c.en.items.push_back({en, "en", positive ? 1 : 0});
        c.it.items.push_back({render(words, true), "it", positive ? 1 : 0});
    }
    return c;
}

AreaSet scenario_areas() {
    Area calabria;
    calabria.nuts_id = "ITF6";
    calabria.parts.push_back({ring({{40.05, 15.75},
                                    {39.95, 16.60},
                                    {39.40, 17.20},
                                    {38.80, 16.95},
                                    {38.40, 16.60},
                                    {37.90, 15.95},
                                    {37.95, 15.55},
                                    {38.80, 15.95},
                                    {39.60, 15.75}}),
                              {}});

    Area campania;
    campania.nuts_id = "ITF3";
    campania.parts.push_back({ring({{41.50, 13.80},
                                    {41.40, 15.00},
                                    {41.00, 15.80},
                                    {40.30, 15.70},
                                    {40.10, 15.30},
                                    {40.60, 14.30},
                                    {41.00, 13.80}}),
                              {ring({{41.20, 14.95}, {41.25, 15.10}, {41.15, 15.10}})}});
    campania.parts.push_back({ring({{40.70, 13.85}, {40.76, 13.95}, {40.70, 13.95}}), {}});
    return AreaSet({calabria, campania});
}

Gazetteer scenario_gazetteer() {
    return Gazetteer({
        {"Reggio Calabria", {"Reggio di Calabria"}, {38.11, 15.65}, 172000, "ITF6"},
        {"Catanzaro", {}, {38.91, 16.59}, 86000, "ITF6"},
        {"Cosenza", {}, {39.30, 16.25}, 65000, "ITF6"},
        {"Lamezia Terme", {"Lamezia"}, {38.97, 16.31}, 70000, "ITF6"},
        {"Crotone", {}, {39.08, 17.12}, 62000, "ITF6"},
        {"Terme", {}, {39.52, 15.95}, 1200, "ITF6"},
        {"Napoli", {"Naples", "Neapel"}, {40.85, 14.27}, 914000, "ITF3"},
        {"Salerno", {}, {40.68, 14.77}, 127000, "ITF3"},
        {"Giugliano in Campania", {"Giugliano"}, {40.93, 14.20}, 123000, "ITF3"},
        {"Torre del Greco", {}, {40.79, 14.37}, 84000, "ITF3"},
        {"Caserta", {}, {41.07, 14.33}, 75000, "ITF3"},
        {"Pozzuoli", {}, {40.82, 14.12}, 76000, "ITF3"},
        {"Milano", {"Milan"}, {45.46, 9.19}, 1352000, "ITC4"},
    });
}

ScenarioFiles write_scenario(const fs::path& dir, const ScenarioOptions& options) {
    if (options.messages == 0 || options.embedding_dim == 0 || options.training_items < 3) {
        throw ConfigError("scenario needs messages, a positive embedding size and at least 3 training items");
    }
    fs::create_directories(dir);
    ScenarioFiles files;
    files.dir = dir;
    files.config = dir / "config.json";
    files.forecasts = dir / "forecasts.ndjson";
    files.messages = dir / "messages.ndjson";
    files.polygons = dir / "nuts2.geojson";
    files.gazetteer = dir / "gazetteer.tsv";
    files.model = dir / "model.txt";
    files.embeddings = {{"en", dir / "embeddings.en.txt"}, {"it", dir / "embeddings.it.txt"}};
    files.datasets = {{"en", dir / "labeled.en.tsv"}, {"it", dir / "labeled.it.tsv"}};

    const AreaSet areas = scenario_areas();
    const Gazetteer gazetteer = scenario_gazetteer();
    write_file_atomic(files.polygons, areas.to_geojson().dump(2) + "\n");
    gazetteer.save(files.gazetteer);

    auto [en_table, it_table] = make_toy_aligned_embeddings(toy_word_pairs(), options.embedding_dim,
                                                            options.seed, "en", "it");
    save_embeddings(en_table, files.embeddings.at("en"));
    save_embeddings(it_table, files.embeddings.at("it"));

    const ToyCorpus corpus = make_toy_corpus(options.training_items, options.seed + 1);
    save_dataset(corpus.en, files.datasets.at("en"));
    save_dataset(corpus.it, files.datasets.at("it"));

    PipelineConfig cfg;
    cfg.paths.gazetteer = files.gazetteer;
    cfg.paths.polygons = files.polygons;
    cfg.paths.model = files.model;
    cfg.paths.state = dir / "state";
    cfg.paths.embeddings = files.embeddings;
    cfg.embedding_mode = EmbeddingMode::aligned;
    cfg.default_language = "it";
    cfg.seed = options.seed;
    cfg.training.seed = options.seed;
    cfg.training.epochs = options.training_epochs;
    cfg.aggregate.jitter_seed = options.seed;

    // Train through the files just written so the model matches what a run loads.
    auto space = cfg.load_embedding_space();
    LabeledDataset both;
    both.items = corpus.en.items;
    both.items.insert(both.items.end(), corpus.it.items.begin(), corpus.it.items.end());
    CnnModel model(cfg.cnn, space, options.seed);
    train(model, both, cfg.training);
    model.save(files.model);
    cfg.save(files.config);

    // Forecasts: Calabria first, an update that moves its peak, then Campania.
    const std::string feed =
        R"({"area_id": "ITF6", "issued_at": "2026-10-10T00:00:00Z", "peak_time": "2026-10-11T12:00:00Z"})"
        "\n"
        R"({"area_id": "ITF6", "issued_at": "2026-10-10T12:00:00Z", "peak_time": "2026-10-11T18:00:00Z"})"
        "\n"
        R"({"area_id": "ITF3", "issued_at": "2026-10-10T12:00:00Z", "peak_time": "2026-10-12T00:00:00Z", "lead_window_hours": 72})"
        "\n";
    write_file_atomic(files.forecasts, feed);

    // Messages.
    std::mt19937_64 rng(options.seed + 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<const GazetteerEntry*> cities;
    for (const auto& e : gazetteer.entries()) {
        if (e.nuts2_id == "ITF6" || e.nuts2_id == "ITF3") {
            cities.push_back(&e);
        }
    }
    auto random_point_in = [&](const Area& a) {
        std::uniform_real_distribution<double> lat(a.envelope.min_lat, a.envelope.max_lat);
        std::uniform_real_distribution<double> lon(a.envelope.min_lon, a.envelope.max_lon);
        for (;;) {
            LatLon p{lat(rng), lon(rng)};
            if (area_contains(a, p)) {
                return p;
            }
        }
    };
    auto pick_city = [&]() -> const GazetteerEntry& {
        return *cities[std::uniform_int_distribution<std::size_t>(0, cities.size() - 1)(rng)];
    };
    auto city_name = [&](const GazetteerEntry& e) {
        const auto names = e.all_names();
        return names[std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng)];
    };
    auto insert_city = [&](std::string sentence, const std::string& city) {
        return unit(rng) < 0.5 ? city + " " + sentence : sentence + " " + city;
    };

    const TimePoint start = parse_utc("2026-10-10T12:00:00Z");
    std::vector<std::string> relevant_texts;
    std::string lines;
    for (std::size_t i = 0; i < options.messages; ++i) {
        Message m;
        char id[32];
        std::snprintf(id, sizeof(id), "m%05zu", i + 1);
        m.id = id;
        m.created_at = start + std::chrono::seconds(static_cast<long>(i) * 150 +
                                                    std::uniform_int_distribution<int>(0, 120)(rng));
        const bool italian = unit(rng) < 0.6;
        if (unit(rng) < 0.9) {
            m.lang = italian ? "it" : "en";
        }
        const double kind = unit(rng);
        if (kind < 0.40) {
            if (!relevant_texts.empty() && unit(rng) < 0.3) {
                m.text = relevant_texts[std::uniform_int_distribution<std::size_t>(0, relevant_texts.size() - 1)(rng)];
                if (unit(rng) < 0.3) {
                    m.text += " https://t.co/" + std::to_string(i);
                }
            } else {
                m.text = insert_city(render(toy_sentence(rng, true), italian), city_name(pick_city()));
                if (unit(rng) < 0.2) {
                    m.text = "#" + m.text;
                }
                relevant_texts.push_back(m.text);
            }
            if (unit(rng) < 0.3) {
                m.coords = random_point_in(areas.areas()[unit(rng) < 0.5 ? 0 : 1]);
            }
        } else if (kind < 0.60) {
            m.text = insert_city(render(toy_sentence(rng, false), italian), city_name(pick_city()));
            if (unit(rng) < 0.2) {
                m.text = "@friend " + m.text;
            }
        } else if (kind < 0.70) {
            m.text = render(toy_sentence(rng, unit(rng) < 0.5), italian);
            m.coords = random_point_in(areas.areas()[unit(rng) < 0.5 ? 0 : 1]);
        } else {
            m.text = render(toy_sentence(rng, unit(rng) < 0.3), italian);
            if (unit(rng) < 0.5) {
                m.text += " Milano";
            }
            if (unit(rng) < 0.3) {
                m.coords = LatLon{45.46 + unit(rng) * 0.1, 9.19 + unit(rng) * 0.1};
            }
        }
        lines += to_json(m).dump();
        lines += '\n';
    }
    write_file_atomic(files.messages, lines);
    return files;
}

}  // namespace floodwatch
