#include "floodwatch/config.hpp"
#include "floodwatch/pipeline.hpp"
#include "floodwatch/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace floodwatch;

namespace {

enum Exit { kOk = 0, kStageFailure = 1, kConfigFailure = 2 };

struct Common {
    std::string config;
    std::string state;
    bool serial = false;
};

PipelineConfig load_config(const Common& c, bool required) {
    PipelineConfig cfg;
    if (!c.config.empty()) {
        cfg = PipelineConfig::load(c.config);
    } else if (required) {
        throw ConfigError("--config is required for this command");
    }
    if (!c.state.empty()) {
        cfg.paths.state = c.state;
    }
    if (cfg.paths.state.empty()) {
        throw ConfigError("no state directory (use --state or paths.state in the config)");
    }
    return cfg;
}

Execution execution(const Common& c) {
    return c.serial ? Execution::serial : Execution::parallel;
}

void print(const json& j) {
    std::cout << j.dump(2) << '\n';
}

std::optional<TimePoint> parse_now(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    try {
        return parse_utc(s);
    } catch (const Error& e) {
        throw ConfigError(std::string("--now: ") + e.what());
    }
}

/// LANG=PATH pairs; a bare PATH maps to "".
std::map<std::string, fs::path> parse_pairs(const std::vector<std::string>& items, const char* flag) {
    std::map<std::string, fs::path> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        const std::string key = eq == std::string::npos ? "" : item.substr(0, eq);
        const std::string value = eq == std::string::npos ? item : item.substr(eq + 1);
        if (value.empty() || !out.emplace(key, value).second) {
            throw ConfigError(std::string(flag) + ": bad or repeated entry '" + item + "'");
        }
    }
    return out;
}

std::vector<std::string> selected_events(const EventStore& store, const std::string& event, bool all) {
    if (all) {
        return store.event_ids();
    }
    if (event.empty()) {
        throw ConfigError("give --event <id> or --all");
    }
    store.load_event(event);
    return {event};
}

struct LearningArgs {
    std::string mode = "mono";
    std::string target;
    std::vector<std::string> data;
    std::vector<std::string> embeddings;
    std::optional<int> epochs;
    std::optional<std::uint64_t> seed;
    std::size_t budget = kWarmStartBudget;
    std::string out;
};

void add_learning_options(CLI::App* sub, LearningArgs& a, Common& c) {
    sub->add_option("--config", c.config, "Pipeline config (CNN, training and embedding settings)");
    sub->add_option("--mode", a.mode, "mono, cold or warm")->check(CLI::IsMember({"mono", "cold", "warm", "all"}));
    sub->add_option("--target", a.target, "Target language")->required();
    sub->add_option("--data", a.data, "Labeled dataset as LANG=PATH (repeatable)")->required();
    sub->add_option("--embeddings", a.embeddings,
                    "Embedding file as LANG=PATH (aligned, repeatable) or PATH (agnostic)");
    sub->add_option("--epochs", a.epochs, "Training epochs");
    sub->add_option("--seed", a.seed, "Seed for initialization, shuffling and splits");
    sub->add_option("--budget", a.budget, "Warm-start target-language items");
}

struct Learning {
    DatasetsByLanguage datasets;
    std::shared_ptr<const EmbeddingSpace> space;
    ExperimentSetup setup;
};

Learning prepare_learning(const LearningArgs& a, const Common& c) {
    Learning l;
    PipelineConfig cfg;
    if (!c.config.empty()) {
        cfg = PipelineConfig::load(c.config);
    }
    if (!a.embeddings.empty()) {
        cfg.paths.embeddings = parse_pairs(a.embeddings, "--embeddings");
        cfg.embedding_mode = cfg.paths.embeddings.count("") ? EmbeddingMode::agnostic : EmbeddingMode::aligned;
    }
    if (cfg.paths.embeddings.empty()) {
        throw ConfigError("no embeddings (use --embeddings or a config)");
    }
    for (const auto& [lang, path] : parse_pairs(a.data, "--data")) {
        if (lang.empty()) {
            throw ConfigError("--data needs LANG=PATH");
        }
        LabeledDataset d = load_dataset(path);
        for (auto& item : d.items) {
            if (item.language.empty()) {
                item.language = lang;
            }
        }
        l.datasets.emplace(lang, std::move(d));
    }
    l.space = cfg.load_embedding_space();
    l.setup.cnn = cfg.cnn;
    l.setup.training = cfg.training;
    if (a.epochs) {
        l.setup.training.epochs = *a.epochs;
    }
    if (a.seed) {
        l.setup.training.seed = *a.seed;
    }
    l.setup.training.validate();
    l.setup.cnn.validate();
    l.setup.warm_budget = a.budget;
    return l;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forecast-triggered social-media flood monitoring"};
    app.require_subcommand(1);
    Common common;

    // trigger
    std::string forecasts, now;
    auto* trigger = app.add_subcommand("trigger", "Open, extend and stop collection events from a forecast feed");
    trigger->add_option("--config", common.config, "Pipeline config")->required();
    trigger->add_option("--forecasts", forecasts, "Forecast feed (NDJSON)")->required();
    trigger->add_option("--state", common.state, "State directory");
    trigger->add_option("--now", now, "Simulation time (default: latest issue time in the feed)");
    trigger->callback([&] {
        const auto cfg = load_config(common, true);
        const auto res = PipelineResources::load(cfg, false);
        EventStore store(cfg.paths.state);
        const auto r = run_trigger_stage(store, cfg, res, forecasts, parse_now(now));
        auto errors = json::array();
        for (const auto& e : r.errors) {
            errors.push_back({{"line", e.line}, {"error", e.message}});
        }
        print({{"events", r.events.size()},
               {"created", r.created},
               {"extended", r.extended},
               {"stopped", r.stopped},
               {"stale", r.stale},
               {"errors", errors}});
    });

    // query
    std::string query_out;
    auto* query = app.add_subcommand("query", "Build the stream query of the active events");
    query->add_option("--config", common.config, "Pipeline config (query limits)");
    query->add_option("--state", common.state, "State directory");
    query->add_option("--out", query_out, "Also write the query here");
    query->callback([&] {
        const auto cfg = load_config(common, false);
        EventStore store(cfg.paths.state);
        const auto q = run_query_stage(store, cfg);
        if (!query_out.empty()) {
            write_file_atomic(query_out, to_json(q).dump(2) + "\n");
        }
        print({{"keywords", q.keywords.size()}, {"boxes", q.boxes.size()}});
    });

    // replay
    std::string source;
    auto* replay = app.add_subcommand("replay", "Route recorded messages into the events' raw files");
    replay->add_option("--source", source, "Message file, '-' for stdin, or tcp://host:port")->required();
    replay->add_option("--state", common.state, "State directory");
    replay->add_option("--config", common.config, "Pipeline config");
    replay->add_flag("--serial", common.serial, "Match messages on one thread");
    replay->callback([&] {
        const auto cfg = load_config(common, false);
        EventStore store(cfg.paths.state);
        const auto r = run_replay_stage(store, source, execution(common));
        print({{"input", r.input},
               {"routed", r.routed},
               {"dropped", r.dropped},
               {"appends", r.appends},
               {"per_event", r.per_event}});
    });

    // classify
    std::string event, model_path;
    bool all_events = false;
    auto* classify = app.add_subcommand("classify", "Score the raw messages of an event");
    classify->add_option("--config", common.config, "Pipeline config")->required();
    classify->add_option("--event", event, "Event id");
    classify->add_flag("--all", all_events, "Every stored event");
    classify->add_option("--model", model_path, "Model file (default: from the config)");
    classify->add_option("--state", common.state, "State directory");
    classify->add_flag("--serial", common.serial, "Run inference on one thread");
    classify->callback([&] {
        auto cfg = load_config(common, true);
        if (!model_path.empty()) {
            cfg.paths.model = model_path;
        }
        const auto space = cfg.load_embedding_space();
        const auto model = CnnModel::load(cfg.paths.model, space);
        EventStore store(cfg.paths.state);
        json out = json::object();
        for (const auto& id : selected_events(store, event, all_events)) {
            out[id] = run_classify_stage(store, id, model, cfg.default_language, execution(common));
        }
        print({{"classified", out}});
    });

    // train
    LearningArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train a relevance classifier");
    add_learning_options(train_cmd, train_args, common);
    train_cmd->add_option("--out", train_args.out, "Where to save the model")->required();
    train_cmd->callback([&] {
        if (train_args.mode == "all") {
            throw ConfigError("train takes a single --mode");
        }
        auto l = prepare_learning(train_args, common);
        std::optional<CnnModel> model;
        const auto row = run_experiment(experiment_mode_from_string(train_args.mode), l.datasets,
                                        train_args.target, l.space, l.setup, &model);
        model->save(fs::path(train_args.out));
        print(row.to_json());
    });

    // aggregate
    auto* aggregate_cmd = app.add_subcommand("aggregate", "Locate, count and map an event's classified messages");
    aggregate_cmd->add_option("--config", common.config, "Pipeline config")->required();
    aggregate_cmd->add_option("--event", event, "Event id");
    aggregate_cmd->add_flag("--all", all_events, "Every stored event");
    aggregate_cmd->add_option("--state", common.state, "State directory");
    aggregate_cmd->add_flag("--serial", common.serial, "Locate points on one thread");
    aggregate_cmd->callback([&] {
        const auto cfg = load_config(common, true);
        const auto res = PipelineResources::load(cfg, false);
        EventStore store(cfg.paths.state);
        json out = json::object();
        for (const auto& id : selected_events(store, event, all_events)) {
            const auto result = run_aggregate_stage(store, id, cfg, res, execution(common));
            const auto classified = store.read_classified(id);
            const auto selection = compute_selection(classified, result, cfg.selection, execution(common));
            run_emit_stage(store, id, cfg, res, result, selection);
            out[id] = {{"located", result.located.size()},
                       {"unlocatable", result.unlocatable},
                       {"areas", result.areas.size()}};
        }
        print(out);
    });

    // select
    auto* select = app.add_subcommand("select", "Pick representative messages of an event");
    select->add_option("--config", common.config, "Pipeline config (selection constants)");
    select->add_option("--event", event, "Event id");
    select->add_flag("--all", all_events, "Every stored event");
    select->add_option("--state", common.state, "State directory");
    select->add_flag("--serial", common.serial, "Compare messages on one thread");
    select->callback([&] {
        const auto cfg = load_config(common, false);
        EventStore store(cfg.paths.state);
        json out = json::object();
        for (const auto& id : selected_events(store, event, all_events)) {
            const auto reps = select_representatives(store.read_classified(id), cfg.selection, execution(common));
            store.write_representatives(id, reps);
            out[id] = reps.size();
        }
        print({{"representatives", out}});
    });

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "Run every stage into a fresh state directory");
    pipeline->add_option("--config", common.config, "Pipeline config")->required();
    pipeline->add_option("--forecasts", forecasts, "Forecast feed (NDJSON)")->required();
    pipeline->add_option("--source", source, "Message file, '-' for stdin, or tcp://host:port")->required();
    pipeline->add_option("--state", common.state, "State directory (must be empty or missing)");
    pipeline->add_option("--now", now, "Simulation time for the trigger stage");
    pipeline->add_flag("--serial", common.serial, "Use the single-threaded kernels");
    pipeline->callback([&] {
        const auto cfg = load_config(common, true);
        try {
            print(run_pipeline(cfg, forecasts, source, parse_now(now), execution(common)).to_json());
        } catch (const PipelineError& e) {
            print(e.partial().to_json());
            throw;
        }
    });

    // experiment
    LearningArgs exp_args;
    auto* experiment = app.add_subcommand("experiment", "Score mono, cold- or warm-start training on a language");
    add_learning_options(experiment, exp_args, common);
    experiment->callback([&] {
        auto l = prepare_learning(exp_args, common);
        std::vector<ExperimentMode> modes;
        if (exp_args.mode == "all") {
            modes = {ExperimentMode::mono, ExperimentMode::cold, ExperimentMode::warm};
        } else {
            modes = {experiment_mode_from_string(exp_args.mode)};
        }
        if (l.setup.warm_budget == 0 &&
            std::find(modes.begin(), modes.end(), ExperimentMode::warm) != modes.end()) {
            throw ConfigError("warm start needs a positive labeled budget");
        }
        std::vector<ExperimentRow> rows;
        for (auto m : modes) {
            rows.push_back(run_experiment(m, l.datasets, exp_args.target, l.space, l.setup));
        }
        std::printf("%-8s %-9s %-5s %9s %9s %9s\n", "language", "embedding", "mode", "precision", "recall", "F");
        for (const auto& row : rows) {
            std::printf("%-8s %-9s %-5s %9.4f %9.4f %9.4f\n", row.language.c_str(), row.embeddings.c_str(),
                        to_string(row.mode), row.report.precision, row.report.recall, row.report.f_measure);
        }
    });

    // scenario
    std::string scenario_dir;
    ScenarioOptions scenario_opts;
    auto* scenario = app.add_subcommand("scenario", "Write the bundled synthetic scenario");
    scenario->add_option("--out", scenario_dir, "Target directory")->required();
    scenario->add_option("--seed", scenario_opts.seed, "Scenario seed");
    scenario->add_option("--messages", scenario_opts.messages, "Number of messages");
    scenario->callback([&] {
        const auto files = write_scenario(scenario_dir, scenario_opts);
        print({{"config", files.config.string()},
               {"forecasts", files.forecasts.string()},
               {"messages", files.messages.string()}});
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigFailure;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kStageFailure;
    }
    return kOk;
}
