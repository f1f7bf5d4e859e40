#include "floodwatch/pipeline.hpp"

#include "floodwatch/kernels.hpp"

#include <algorithm>
#include <chrono>

namespace floodwatch {

namespace fs = std::filesystem;
using nlohmann::json;

PipelineResources PipelineResources::load(const PipelineConfig& cfg, bool with_model) {
    PipelineResources res;
    res.areas = AreaSet::load(cfg.paths.polygons);
    res.gazetteer = Gazetteer::load(cfg.paths.gazetteer);
    if (with_model) {
        res.embeddings = cfg.load_embedding_space();
        res.model = CnnModel::load(cfg.paths.model, res.embeddings);
    }
    return res;
}

TriggerResult run_trigger_stage(EventStore& store, const PipelineConfig& cfg, const PipelineResources& res,
                                const fs::path& forecast_feed, std::optional<TimePoint> now) {
    if (!fs::is_regular_file(forecast_feed)) {
        throw ConfigError("forecast feed not found: " + forecast_feed.string());
    }
    ForecastFeed feed = parse_forecast_feed(read_file(forecast_feed));
    TimePoint clock{};
    if (now) {
        clock = *now;
    } else {
        for (const auto& f : feed.forecasts) {
            clock = std::max(clock, f.issued_at);
        }
    }
    TriggerResult result =
        trigger_events(feed.forecasts, store.load_events(), cfg.trigger, res.areas, res.gazetteer, clock);
    result.errors.insert(result.errors.begin(), feed.errors.begin(), feed.errors.end());
    for (const auto& e : result.events) {
        store.save_event(e);
    }
    return result;
}

StreamQuery run_query_stage(EventStore& store, const PipelineConfig& cfg) {
    StreamQuery q = build_query(store.load_events(), cfg.query);
    const auto violations = validate_query(q, cfg.query);
    if (!violations.empty()) {
        throw StageError("query violates stream limits: " + violations.front().detail);
    }
    store.save_query(q);
    return q;
}

RoutingReport run_replay_stage(EventStore& store, const std::string& source, Execution exec) {
    const auto query = store.load_query();
    if (!query) {
        throw StageError("no stream query in " + store.root().string());
    }
    ReplaySource src(source);
    EventFileSink sink(store.root());
    return route(src, *query, sink, exec);
}

std::string classification_language(const Message& msg, const EmbeddingSpace& space,
                                    const std::string& default_language) {
    if (space.mode() == EmbeddingMode::agnostic) {
        return msg.lang.value_or("");
    }
    if (msg.lang && space.covers(*msg.lang)) {
        return *msg.lang;
    }
    return default_language;
}

std::vector<ClassifiedMessage> classify_messages(const CnnModel& model, std::span<const Message> messages,
                                                 const std::string& default_language, Execution exec) {
    std::vector<EncodedText> inputs;
    inputs.reserve(messages.size());
    for (const auto& m : messages) {
        inputs.push_back(
            encode_text(m.text, classification_language(m, model.embeddings(), default_language)));
    }
    const auto probs = exec == Execution::parallel ? kernels::infer_batch_parallel(model, inputs)
                                                   : kernels::infer_batch_serial(model, inputs);
    std::vector<ClassifiedMessage> out;
    out.reserve(messages.size());
    for (std::size_t i = 0; i < messages.size(); ++i) {
        out.push_back({messages[i], probs[i].positive});
    }
    return out;
}

std::size_t run_classify_stage(EventStore& store, const std::string& event_id, const CnnModel& model,
                               const std::string& default_language, Execution exec) {
    store.load_event(event_id);
    const auto raw = store.read_raw(event_id);
    const auto classified = classify_messages(model, raw, default_language, exec);
    store.write_classified(event_id, classified);
    return classified.size();
}

AggregationResult run_aggregate_stage(const EventStore& store, const std::string& event_id,
                                      const PipelineConfig& cfg, const PipelineResources& res, Execution exec) {
    const CollectionEvent event = store.load_event(event_id);
    const auto classified = store.read_classified(event_id);
    std::vector<std::string> include(event.area_ids.begin(), event.area_ids.end());
    include.erase(std::remove_if(include.begin(), include.end(),
                                 [&](const std::string& id) { return !res.areas.contains_id(id); }),
                  include.end());
    return aggregate(classified, res.areas, res.gazetteer, cfg.aggregate, include, exec);
}

SelectionOutput compute_selection(std::span<const ClassifiedMessage> classified, const AggregationResult& located,
                                  const SelectionConfig& cfg, Execution exec) {
    SelectionOutput out;
    out.event = select_representatives(classified, cfg, exec);
    std::map<std::string, std::vector<ClassifiedMessage>> by_area;
    for (const auto& loc : located.located) {
        if (loc.input_index >= classified.size()) {
            throw StageError("aggregation does not match the classified messages");
        }
        by_area[loc.nuts2_id].push_back(classified[loc.input_index]);
    }
    for (const auto& [area, msgs] : by_area) {
        auto reps = select_representatives(msgs, cfg, exec);
        if (!reps.empty()) {
            out.by_area.emplace(area, std::move(reps));
        }
    }
    return out;
}

SelectionOutput run_select_stage(EventStore& store, const std::string& event_id, const PipelineConfig& cfg,
                                 const AggregationResult& located, Execution exec) {
    const auto classified = store.read_classified(event_id);
    SelectionOutput out = compute_selection(classified, located, cfg.selection, exec);
    store.write_representatives(event_id, out.event);
    return out;
}

void run_emit_stage(EventStore& store, const std::string& event_id, const PipelineConfig& cfg,
                    const PipelineResources& res, const AggregationResult& result, const SelectionOutput& selection) {
    const json layer = emit_layer(result, selection.by_area, res.areas, cfg.aggregate);
    store.write_json(store.aggregates_path(event_id), layer);

    auto areas = json::array();
    std::size_t relevant = 0;
    for (const auto& a : result.areas) {
        relevant += a.relevant_messages;
        areas.push_back({{"NUTS_ID", a.nuts2_id},
                         {"total_messages", a.total_messages},
                         {"relevant_messages", a.relevant_messages},
                         {"activity", to_string(a.activity)}});
    }
    store.write_json(store.report_path(event_id),
                     {{"event_id", event_id},
                      {"classified", result.located.size() + result.unlocatable},
                      {"located", result.located.size()},
                      {"unlocatable", result.unlocatable},
                      {"relevant_located", relevant},
                      {"representatives", selection.event.size()},
                      {"areas", areas}});
}

json RunReport::to_json() const {
    auto st = json::array();
    for (const auto& s : stages) {
        st.push_back({{"stage", s.stage}, {"seconds", s.seconds}, {"counts", s.counts}});
    }
    json doc = {{"completed", completed}, {"stages", st}};
    if (!error.empty()) {
        doc["error"] = error;
    }
    return doc;
}

namespace {

class StageClock {
public:
    StageClock() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

RunReport run_pipeline(const PipelineConfig& cfg, const fs::path& forecast_feed, const std::string& message_source,
                       std::optional<TimePoint> now, Execution exec) {
    cfg.validate(true);
    if (fs::exists(cfg.paths.state) && !fs::is_empty(cfg.paths.state)) {
        throw ConfigError("state directory " + cfg.paths.state.string() + " is not empty");
    }
    if (!fs::is_regular_file(forecast_feed)) {
        throw ConfigError("forecast feed not found: " + forecast_feed.string());
    }
    if (message_source != "-" && message_source.rfind("tcp://", 0) != 0 && !fs::is_regular_file(message_source)) {
        throw ConfigError("message source not found: " + message_source);
    }
    const PipelineResources res = PipelineResources::load(cfg, true);
    fs::create_directories(cfg.paths.state);
    EventStore store(cfg.paths.state);
    RunReport report;

    auto finish = [&](const std::string& error) {
        report.completed = error.empty();
        report.error = error;
        store.write_json(store.root() / "run_report.json", report.to_json());
    };

    std::string current;
    try {
        current = "trigger";
        StageClock t0;
        const TriggerResult trig = run_trigger_stage(store, cfg, res, forecast_feed, now);
        report.stages.push_back({current,
                                 t0.seconds(),
                                 {{"events", trig.events.size()},
                                  {"created", trig.created},
                                  {"extended", trig.extended},
                                  {"stopped", trig.stopped},
                                  {"stale", trig.stale},
                                  {"rejected_records", trig.errors.size()}}});

        current = "query";
        StageClock t1;
        const StreamQuery q = run_query_stage(store, cfg);
        report.stages.push_back(
            {current, t1.seconds(), {{"keywords", q.keywords.size()}, {"boxes", q.boxes.size()}}});

        current = "replay";
        StageClock t2;
        const RoutingReport routing = run_replay_stage(store, message_source, exec);
        report.stages.push_back({current,
                                 t2.seconds(),
                                 {{"input", routing.input},
                                  {"routed", routing.routed},
                                  {"dropped", routing.dropped},
                                  {"appends", routing.appends},
                                  {"per_event", routing.per_event}}});

        const auto ids = store.event_ids();
        current = "classify";
        StageClock t3;
        std::size_t classified = 0;
        for (const auto& id : ids) {
            classified += run_classify_stage(store, id, *res.model, cfg.default_language, exec);
        }
        report.stages.push_back({current, t3.seconds(), {{"classified", classified}}});

        current = "aggregate";
        StageClock t4;
        std::map<std::string, AggregationResult> aggregates;
        std::size_t located = 0, unlocatable = 0;
        for (const auto& id : ids) {
            auto r = run_aggregate_stage(store, id, cfg, res, exec);
            located += r.located.size();
            unlocatable += r.unlocatable;
            aggregates.emplace(id, std::move(r));
        }
        report.stages.push_back({current, t4.seconds(), {{"located", located}, {"unlocatable", unlocatable}}});

        current = "select";
        StageClock t5;
        std::map<std::string, SelectionOutput> selections;
        std::size_t reps = 0;
        for (const auto& id : ids) {
            auto s = run_select_stage(store, id, cfg, aggregates.at(id), exec);
            reps += s.event.size();
            selections.emplace(id, std::move(s));
        }
        report.stages.push_back({current, t5.seconds(), {{"representatives", reps}}});

        current = "emit";
        StageClock t6;
        auto features = json::array();
        for (const auto& id : ids) {
            run_emit_stage(store, id, cfg, res, aggregates.at(id), selections.at(id));
            json layer = json::parse(read_file(store.aggregates_path(id)));
            for (auto& f : layer["features"]) {
                f["properties"]["event_id"] = id;
                features.push_back(std::move(f));
            }
        }
        store.write_json(store.root() / "layer.geojson", {{"type", "FeatureCollection"}, {"features", features}});
        report.stages.push_back({current, t6.seconds(), {{"events", ids.size()}, {"features", features.size()}}});
    } catch (const ConfigError& e) {
        finish(current + ": " + e.what());
        throw;
    } catch (const Error& e) {
        finish(current + ": " + e.what());
        throw PipelineError(current + " stage failed: " + e.what(), report);
    }
    finish("");
    return report;
}

const char* to_string(ExperimentMode m) {
    switch (m) {
        case ExperimentMode::mono: return "mono";
        case ExperimentMode::cold: return "cold";
        case ExperimentMode::warm: return "warm";
    }
    return "mono";
}

ExperimentMode experiment_mode_from_string(std::string_view s) {
    if (s == "mono") {
        return ExperimentMode::mono;
    }
    if (s == "cold") {
        return ExperimentMode::cold;
    }
    if (s == "warm") {
        return ExperimentMode::warm;
    }
    throw ConfigError("unknown experiment mode '" + std::string(s) + "'");
}

json ExperimentRow::to_json() const {
    return {{"language", language},
            {"embeddings", embeddings},
            {"mode", to_string(mode)},
            {"precision", report.precision},
            {"recall", report.recall},
            {"f_measure", report.f_measure},
            {"tp", report.true_positive},
            {"fp", report.false_positive},
            {"tn", report.true_negative},
            {"fn", report.false_negative},
            {"training_size", training_size},
            {"test_size", test_size}};
}

ExperimentRow run_experiment(ExperimentMode mode, const DatasetsByLanguage& datasets,
                             const std::string& target_language, std::shared_ptr<const EmbeddingSpace> space,
                             const ExperimentSetup& setup, std::optional<CnnModel>* model_out) {
    auto it = datasets.find(target_language);
    if (it == datasets.end()) {
        throw ConfigError("no labeled dataset for language '" + target_language + "'");
    }
    if (!space) {
        throw ConfigError("experiment needs an embedding space");
    }
    ExperimentRow row;
    row.language = target_language;
    row.embeddings = space->mode() == EmbeddingMode::aligned ? "aligned" : "agnostic";
    row.mode = mode;
    const DatasetSplit split = split_dataset(it->second, setup.training.seed);
    row.test_size = split.test.size();

    DatasetsByLanguage others = datasets;
    others.erase(target_language);

    switch (mode) {
        case ExperimentMode::mono: {
            CnnModel model(setup.cnn, space, setup.training.seed);
            train(model, split.train, setup.training);
            row.training_size = split.train.size();
            row.report = evaluate(model, split.test);
            if (model_out) {
                *model_out = std::move(model);
            }
            break;
        }
        case ExperimentMode::cold: {
            auto r = cold_start_train(others, target_language, space, setup.cnn, setup.training);
            row.training_size = r.training_size;
            row.report = evaluate(r.model, split.test);
            if (model_out) {
                *model_out = std::move(r.model);
            }
            break;
        }
        case ExperimentMode::warm: {
            if (setup.warm_budget == 0) {
                throw ConfigError("warm start needs a positive labeled budget");
            }
            if (split.train.size() < setup.warm_budget) {
                throw ConfigError("target training portion holds " + std::to_string(split.train.size()) +
                                  " items, fewer than the warm-start budget of " +
                                  std::to_string(setup.warm_budget));
            }
            LabeledDataset budget;
            budget.provenance = "warm-start budget";
            budget.items.assign(split.train.items.begin(), split.train.items.begin() + setup.warm_budget);
            auto r = warm_start_train(others, target_language, budget, split.test, space, setup.cnn, setup.training,
                                      setup.warm_budget);
            row.training_size = r.training_size;
            row.report = evaluate(r.model, split.test);
            if (model_out) {
                *model_out = std::move(r.model);
            }
            break;
        }
    }
    return row;
}

}  // namespace floodwatch
