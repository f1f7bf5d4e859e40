#pragma once

#include "floodwatch/aggregate.hpp"
#include "floodwatch/cnn.hpp"
#include "floodwatch/embeddings.hpp"
#include "floodwatch/forecast.hpp"
#include "floodwatch/query.hpp"
#include "floodwatch/selection.hpp"
#include "floodwatch/training.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <string>

namespace floodwatch {

struct PipelinePaths {
    std::filesystem::path gazetteer;
    std::filesystem::path polygons;
    std::filesystem::path model;
    std::filesystem::path state;
    /// Language -> vector file; the single agnostic table uses key "".
    std::map<std::string, std::filesystem::path> embeddings;
};

/// Everything a run needs. Relative paths in the file are resolved against
/// the directory holding the config file.
struct PipelineConfig {
    PipelinePaths paths;
    EmbeddingMode embedding_mode = EmbeddingMode::agnostic;
    /// Table used for messages without a language (or one the aligned
    /// space does not cover).
    std::string default_language;
    TriggerConfig trigger;
    QueryLimits query;
    CnnConfig cnn;
    TrainOptions training;
    AggregateConfig aggregate;
    SelectionConfig selection;
    std::uint64_t seed = 1;

    /// Checks constants, and with `check_files` that every input file exists.
    void validate(bool check_files = true) const;

    static PipelineConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
    static PipelineConfig load(const std::filesystem::path& path);
    /// Paths are written relative to `base_dir` when it is non-empty.
    nlohmann::json to_json(const std::filesystem::path& base_dir = {}) const;
    void save(const std::filesystem::path& path) const;

    std::shared_ptr<const EmbeddingSpace> load_embedding_space() const;
};

}  // namespace floodwatch
