#include "floodwatch/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace floodwatch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Reads optional members of one JSON object and rejects unknown ones.
class Section {
public:
    Section(const json& doc, std::string name) : name_(std::move(name)) {
        if (doc.is_null()) {
            return;
        }
        if (!doc.is_object()) {
            throw ConfigError("config section '" + name_ + "' must be an object");
        }
        doc_ = &doc;
    }

    template <typename T>
    void read(const char* key, T& out) {
        known_.insert(key);
        if (doc_ == nullptr || !doc_->contains(key)) {
            return;
        }
        try {
            out = doc_->at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config value '" + name_ + "." + key + "' has the wrong type");
        }
    }

    const json& child(const char* key) {
        known_.insert(key);
        static const json null;
        if (doc_ == nullptr || !doc_->contains(key)) {
            return null;
        }
        return doc_->at(key);
    }

    void finish() const {
        if (doc_ == nullptr) {
            return;
        }
        for (const auto& [key, value] : doc_->items()) {
            if (!known_.count(key)) {
                throw ConfigError("unknown config key '" + name_ + "." + key + "'");
            }
        }
    }

private:
    const json* doc_ = nullptr;
    std::string name_;
    std::set<std::string> known_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) {
        return {};
    }
    fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

std::string relative_to(const fs::path& p, const fs::path& base) {
    if (p.empty() || base.empty()) {
        return p.generic_string();
    }
    return p.lexically_relative(base).generic_string();
}

const std::map<std::string, std::string>& notes() {
    static const std::map<std::string, std::string> n = {
        {"trigger.min_population", "published value: cities above 80,000 inhabitants"},
        {"trigger.post_peak_hold_hours", "published value: collection continues 48 h after the peak"},
        {"query.max_keywords", "published stream limit"},
        {"query.max_keyword_bytes", "published stream limit (keywords strictly shorter)"},
        {"query.max_boxes", "published stream limit"},
        {"cnn.seq_len", "published value"},
        {"cnn.conv_width", "published value"},
        {"cnn.filters", "published value"},
        {"cnn.pool_window", "published value"},
        {"cnn.hidden", "published value"},
        {"training.learning_rate", "local choice"},
        {"training.momentum", "local choice"},
        {"training.batch_size", "local choice"},
        {"training.epochs", "local choice"},
        {"aggregate.relevance_threshold", "published value"},
        {"aggregate.activity_low", "local choice, no published value"},
        {"aggregate.activity_high", "local choice, no published value"},
        {"aggregate.jitter_degrees", "local choice, published as a small random scatter"},
        {"selection.min_probability", "published value"},
        {"selection.pool_cap", "published value"},
        {"selection.prob_bucket", "published value"},
        {"selection.dup_similarity", "published value"},
        {"selection.top_unique", "published value"},
        {"selection.output_count", "local choice"},
        {"seed", "local choice"},
    };
    return n;
}

}  // namespace

void PipelineConfig::validate(bool check_files) const {
    trigger.validate();
    query.validate();
    cnn.validate();
    training.validate();
    aggregate.validate();
    selection.validate();
    if (paths.state.empty()) {
        throw ConfigError("config lacks paths.state");
    }
    if (paths.embeddings.empty()) {
        throw ConfigError("config lacks embedding files");
    }
    if (embedding_mode == EmbeddingMode::agnostic && (paths.embeddings.size() != 1 || !paths.embeddings.count(""))) {
        throw ConfigError("agnostic embeddings take exactly one file");
    }
    if (embedding_mode == EmbeddingMode::aligned) {
        if (paths.embeddings.count("")) {
            throw ConfigError("aligned embedding files need a language");
        }
        if (!paths.embeddings.count(default_language)) {
            throw ConfigError("default language '" + default_language + "' has no aligned embeddings");
        }
    }
    if (!check_files) {
        return;
    }
    auto require = [](const fs::path& p, const char* what) {
        if (p.empty()) {
            throw ConfigError(std::string("config lacks paths.") + what);
        }
        if (!fs::is_regular_file(p)) {
            throw ConfigError(std::string(what) + " file not found: " + p.string());
        }
    };
    require(paths.gazetteer, "gazetteer");
    require(paths.polygons, "polygons");
    require(paths.model, "model");
    for (const auto& [lang, p] : paths.embeddings) {
        require(p, "embeddings");
    }
}

PipelineConfig PipelineConfig::from_json(const json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    PipelineConfig cfg;
    Section top(doc, "config");
    top.read("seed", cfg.seed);
    top.child("notes");

    Section paths(top.child("paths"), "paths");
    std::string gaz, poly, model, state;
    paths.read("gazetteer", gaz);
    paths.read("polygons", poly);
    paths.read("model", model);
    paths.read("state", state);
    cfg.paths.gazetteer = resolve(base_dir, gaz);
    cfg.paths.polygons = resolve(base_dir, poly);
    cfg.paths.model = resolve(base_dir, model);
    cfg.paths.state = resolve(base_dir, state);
    paths.finish();

    Section emb(top.child("embeddings"), "embeddings");
    std::string mode = "agnostic";
    emb.read("mode", mode);
    emb.read("default_language", cfg.default_language);
    if (mode == "agnostic") {
        cfg.embedding_mode = EmbeddingMode::agnostic;
        std::string file;
        emb.read("file", file);
        if (!file.empty()) {
            cfg.paths.embeddings[""] = resolve(base_dir, file);
        }
    } else if (mode == "aligned") {
        cfg.embedding_mode = EmbeddingMode::aligned;
        std::map<std::string, std::string> files;
        emb.read("files", files);
        for (const auto& [lang, file] : files) {
            cfg.paths.embeddings[lang] = resolve(base_dir, file);
        }
    } else {
        throw ConfigError("embeddings.mode must be 'agnostic' or 'aligned'");
    }
    emb.finish();

    Section trig(top.child("trigger"), "trigger");
    trig.read("min_population", cfg.trigger.min_population);
    trig.read("post_peak_hold_hours", cfg.trigger.post_peak_hold_hours);
    trig.finish();

    Section q(top.child("query"), "query");
    q.read("max_keywords", cfg.query.max_keywords);
    q.read("max_keyword_bytes", cfg.query.max_keyword_bytes);
    q.read("max_boxes", cfg.query.max_boxes);
    q.finish();

    Section cnn(top.child("cnn"), "cnn");
    cnn.read("seq_len", cfg.cnn.seq_len);
    cnn.read("conv_width", cfg.cnn.conv_width);
    cnn.read("filters", cfg.cnn.filters);
    cnn.read("pool_window", cfg.cnn.pool_window);
    cnn.read("hidden", cfg.cnn.hidden);
    cnn.read("frozen_embeddings", cfg.cnn.frozen_embeddings);
    cnn.finish();

    Section tr(top.child("training"), "training");
    tr.read("epochs", cfg.training.epochs);
    tr.read("learning_rate", cfg.training.learning_rate);
    tr.read("momentum", cfg.training.momentum);
    tr.read("batch_size", cfg.training.batch_size);
    tr.finish();

    Section agg(top.child("aggregate"), "aggregate");
    agg.read("relevance_threshold", cfg.aggregate.relevance_threshold);
    agg.read("activity_low", cfg.aggregate.activity.low);
    agg.read("activity_high", cfg.aggregate.activity.high);
    agg.read("jitter_degrees", cfg.aggregate.jitter_degrees);
    agg.finish();

    Section sel(top.child("selection"), "selection");
    sel.read("min_probability", cfg.selection.min_probability);
    sel.read("pool_cap", cfg.selection.pool_cap);
    sel.read("prob_bucket", cfg.selection.prob_bucket);
    sel.read("dup_similarity", cfg.selection.dup_similarity);
    sel.read("top_unique", cfg.selection.top_unique);
    sel.read("output_count", cfg.selection.output_count);
    sel.finish();

    top.finish();
    cfg.training.seed = cfg.seed;
    cfg.aggregate.jitter_seed = cfg.seed;
    return cfg;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(doc, path.parent_path());
}

json PipelineConfig::to_json(const fs::path& base_dir) const {
    json emb;
    if (embedding_mode == EmbeddingMode::agnostic) {
        emb["mode"] = "agnostic";
        auto it = paths.embeddings.find("");
        emb["file"] = it == paths.embeddings.end() ? std::string() : relative_to(it->second, base_dir);
    } else {
        emb["mode"] = "aligned";
        json files = json::object();
        for (const auto& [lang, p] : paths.embeddings) {
            files[lang] = relative_to(p, base_dir);
        }
        emb["files"] = files;
    }
    emb["default_language"] = default_language;
    return {
        {"seed", seed},
        {"paths",
         {{"gazetteer", relative_to(paths.gazetteer, base_dir)},
          {"polygons", relative_to(paths.polygons, base_dir)},
          {"model", relative_to(paths.model, base_dir)},
          {"state", relative_to(paths.state, base_dir)}}},
        {"embeddings", emb},
        {"trigger",
         {{"min_population", trigger.min_population}, {"post_peak_hold_hours", trigger.post_peak_hold_hours}}},
        {"query",
         {{"max_keywords", query.max_keywords},
          {"max_keyword_bytes", query.max_keyword_bytes},
          {"max_boxes", query.max_boxes}}},
        {"cnn",
         {{"seq_len", cnn.seq_len},
          {"conv_width", cnn.conv_width},
          {"filters", cnn.filters},
          {"pool_window", cnn.pool_window},
          {"hidden", cnn.hidden},
          {"frozen_embeddings", cnn.frozen_embeddings}}},
        {"training",
         {{"epochs", training.epochs},
          {"learning_rate", training.learning_rate},
          {"momentum", training.momentum},
          {"batch_size", training.batch_size}}},
        {"aggregate",
         {{"relevance_threshold", aggregate.relevance_threshold},
          {"activity_low", aggregate.activity.low},
          {"activity_high", aggregate.activity.high},
          {"jitter_degrees", aggregate.jitter_degrees}}},
        {"selection",
         {{"min_probability", selection.min_probability},
          {"pool_cap", selection.pool_cap},
          {"prob_bucket", selection.prob_bucket},
          {"dup_similarity", selection.dup_similarity},
          {"top_unique", selection.top_unique},
          {"output_count", selection.output_count}}},
        {"notes", notes()},
    };
}

void PipelineConfig::save(const fs::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write config " + path.string());
    }
    out << to_json(path.parent_path()).dump(2) << '\n';
}

std::shared_ptr<const EmbeddingSpace> PipelineConfig::load_embedding_space() const {
    if (embedding_mode == EmbeddingMode::agnostic) {
        auto it = paths.embeddings.find("");
        if (it == paths.embeddings.end()) {
            throw ConfigError("no agnostic embedding file configured");
        }
        return std::make_shared<const EmbeddingSpace>(
            EmbeddingSpace::agnostic(load_embeddings(it->second, EmbeddingMode::agnostic).table));
    }
    std::map<std::string, EmbeddingTable> tables;
    for (const auto& [lang, p] : paths.embeddings) {
        tables.emplace(lang, load_embeddings(p, EmbeddingMode::aligned, lang).table);
    }
    return std::make_shared<const EmbeddingSpace>(EmbeddingSpace::aligned(std::move(tables)));
}

}  // namespace floodwatch
