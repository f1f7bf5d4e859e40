#pragma once

#include "floodwatch/aggregate.hpp"
#include "floodwatch/config.hpp"
#include "floodwatch/event_store.hpp"
#include "floodwatch/router.hpp"
#include "floodwatch/training.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace floodwatch {

/// Static inputs shared by the stages.
struct PipelineResources {
    AreaSet areas;
    Gazetteer gazetteer;
    std::shared_ptr<const EmbeddingSpace> embeddings;
    std::optional<CnnModel> model;

    /// Loads polygons and gazetteer, plus embeddings and model if `with_model`.
    static PipelineResources load(const PipelineConfig& cfg, bool with_model = true);
};

/// Trigger stage: reads the forecast feed, updates and persists events.
/// `now` defaults to the latest issued_at in the feed.
TriggerResult run_trigger_stage(EventStore& store, const PipelineConfig& cfg, const PipelineResources& res,
                                const std::filesystem::path& forecast_feed,
                                std::optional<TimePoint> now = std::nullopt);

/// Builds and persists the stream query from the stored events.
StreamQuery run_query_stage(EventStore& store, const PipelineConfig& cfg);

/// Routes every message of `source` to the raw files of the stored query's events.
RoutingReport run_replay_stage(EventStore& store, const std::string& source, Execution exec = Execution::parallel);

/// Language used to embed a message: its own if the space covers it, else
/// `default_language`.
std::string classification_language(const Message& msg, const EmbeddingSpace& space,
                                    const std::string& default_language);

std::vector<ClassifiedMessage> classify_messages(const CnnModel& model, std::span<const Message> messages,
                                                 const std::string& default_language,
                                                 Execution exec = Execution::parallel);

/// Classifies the raw messages of one event into classified.ndjson.
std::size_t run_classify_stage(EventStore& store, const std::string& event_id, const CnnModel& model,
                               const std::string& default_language, Execution exec = Execution::parallel);

/// Aggregates the classified messages of one event over the event's areas
/// and every area a message lands in.
AggregationResult run_aggregate_stage(const EventStore& store, const std::string& event_id,
                                      const PipelineConfig& cfg, const PipelineResources& res,
                                      Execution exec = Execution::parallel);

struct SelectionOutput {
    std::vector<RepresentativeTweet> event;  ///< written to representatives.ndjson
    RepresentativesByArea by_area;
};

SelectionOutput compute_selection(std::span<const ClassifiedMessage> classified, const AggregationResult& located,
                                  const SelectionConfig& cfg, Execution exec = Execution::parallel);

/// Event-wide representatives (persisted) and per-area ones (for the layer).
SelectionOutput run_select_stage(EventStore& store, const std::string& event_id, const PipelineConfig& cfg,
                                 const AggregationResult& located, Execution exec = Execution::parallel);

/// Writes the map layer to aggregates.geojson and the per-event report.
void run_emit_stage(EventStore& store, const std::string& event_id, const PipelineConfig& cfg,
                    const PipelineResources& res, const AggregationResult& result, const SelectionOutput& selection);

struct StageReport {
    std::string stage;
    double seconds = 0.0;
    nlohmann::json counts;
};

struct RunReport {
    std::vector<StageReport> stages;
    bool completed = false;
    std::string error;

    nlohmann::json to_json() const;
};

class PipelineError : public StageError {
public:
    PipelineError(const std::string& what, RunReport partial) : StageError(what), partial_(std::move(partial)) {}
    const RunReport& partial() const { return partial_; }

private:
    RunReport partial_;
};

/// Runs every stage in order into an empty (or missing) state directory,
/// persisting each stage before the next. The report (with timings) goes to
/// <state>/run_report.json. A stage failure throws PipelineError after the
/// partial report is written.
RunReport run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& forecast_feed,
                       const std::string& message_source, std::optional<TimePoint> now = std::nullopt,
                       Execution exec = Execution::parallel);

enum class ExperimentMode { mono, cold, warm };
const char* to_string(ExperimentMode m);
ExperimentMode experiment_mode_from_string(std::string_view s);

struct ExperimentRow {
    std::string language;
    std::string embeddings;  ///< "agnostic" or "aligned"
    ExperimentMode mode = ExperimentMode::mono;
    EvalReport report;
    std::size_t training_size = 0;
    std::size_t test_size = 0;

    nlohmann::json to_json() const;
};

struct ExperimentSetup {
    CnnConfig cnn;
    TrainOptions training;  ///< its seed also fixes every split
    std::size_t warm_budget = kWarmStartBudget;
};

/// Trains one model under the chosen protocol and scores it on the fixed
/// test portion of the target language. Warm start takes the first
/// `warm_budget` items of the target training portion; a zero budget is
/// rejected. Throws ConfigError for a missing target dataset. The trained
/// model is moved into `model_out` when given.
ExperimentRow run_experiment(ExperimentMode mode, const DatasetsByLanguage& datasets,
                             const std::string& target_language, std::shared_ptr<const EmbeddingSpace> space,
                             const ExperimentSetup& setup, std::optional<CnnModel>* model_out = nullptr);

}  // namespace floodwatch
