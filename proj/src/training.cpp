#include "floodwatch/training.hpp"

#include "floodwatch/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace floodwatch {

void TrainOptions::validate() const {
    if (epochs < 0) {
        throw ConfigError("epochs must be non-negative");
    }
    if (batch_size == 0) {
        throw ConfigError("batch size must be positive");
    }
    if (!(learning_rate > 0.0) || momentum < 0.0 || momentum >= 1.0) {
        throw ConfigError("learning rate must be positive and momentum in [0, 1)");
    }
}

namespace {

constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;

struct EpochStats {
    double loss = 0.0;
    double accuracy = 0.0;
};

EpochStats full_pass(const CnnModel& model, const std::vector<EncodedText>& inputs, const std::vector<int>& labels) {
    auto probs = kernels::infer_batch_serial(model, inputs);
    EpochStats s;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = labels[i] == 1 ? probs[i].positive : probs[i].negative;
        s.loss -= std::log(std::max(p, 1e-300));
        correct += ((probs[i].positive >= 0.5) == (labels[i] == 1)) ? 1 : 0;
    }
    s.loss /= static_cast<double>(probs.size());
    s.accuracy = static_cast<double>(correct) / static_cast<double>(probs.size());
    return s;
}

}  // namespace

TrainResult train(CnnModel& model, const LabeledDataset& data, const TrainOptions& opts) {
    opts.validate();
    TrainResult result;
    if (opts.epochs == 0) {
        return result;
    }
    if (data.empty()) {
        throw ConfigError("training data is empty");
    }
    for (const auto& it : data.items) {
        if (!model.embeddings().covers(it.language)) {
            throw ConfigError("embedding space does not cover language '" + it.language + "'");
        }
    }
    const auto inputs = encode_items(data);
    const auto labels = labels_of(data);

    std::shared_ptr<EmbeddingSpace> tuned;
    if (!model.config().frozen_embeddings) {
        tuned = std::make_shared<EmbeddingSpace>(model.embeddings());
        model.set_embeddings(tuned);
    }

    CnnParams velocity = zero_gradients(model).params;
    std::map<std::pair<std::string, std::string>, std::vector<double>> emb_velocity;

    std::mt19937_64 rng(opts.seed ^ kShuffleStream);
    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<EncodedText> batch;
    std::vector<int> batch_labels;

    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += opts.batch_size) {
            const std::size_t end = std::min(start + opts.batch_size, order.size());
            batch.clear();
            batch_labels.clear();
            for (std::size_t i = start; i < end; ++i) {
                batch.push_back(inputs[order[i]]);
                batch_labels.push_back(labels[order[i]]);
            }
            double loss = 0.0;
            Gradients g = model.gradients(batch, batch_labels, &loss);
            if (!std::isfinite(loss)) {
                throw TrainingError("non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch starting at " +
                                    std::to_string(start) + " (loss " + std::to_string(loss) + ")");
            }
            auto params = model.params().tensors();
            auto vel = velocity.tensors();
            const auto grads = std::as_const(g.params).tensors();
            for (std::size_t t = 0; t < params.size(); ++t) {
                auto& p = *params[t];
                auto& v = *vel[t];
                const auto& gr = *grads[t];
                for (std::size_t i = 0; i < p.size(); ++i) {
                    v[i] = opts.momentum * v[i] - opts.learning_rate * gr[i];
                    p[i] += v[i];
                }
            }
            if (tuned) {
                for (const auto& [key, gr] : g.embeddings) {
                    double* row = tuned->table_for_mutable(key.first).find_mutable(key.second);
                    auto& v = emb_velocity[key];
                    v.resize(gr.size(), 0.0);
                    for (std::size_t j = 0; j < gr.size(); ++j) {
                        v[j] = opts.momentum * v[j] - opts.learning_rate * gr[j];
                        row[j] += v[j];
                    }
                }
            }
            if (!model.params().all_finite()) {
                throw TrainingError("non-finite parameter after update at epoch " + std::to_string(epoch + 1) +
                                    ", batch starting at " + std::to_string(start));
            }
        }
        const EpochStats s = full_pass(model, inputs, labels);
        if (!std::isfinite(s.loss)) {
            throw TrainingError("non-finite training loss after epoch " + std::to_string(epoch + 1));
        }
        result.loss_curve.push_back(s.loss);
        result.accuracy_curve.push_back(s.accuracy);
    }
    return result;
}

EvalReport report_from_predictions(const std::vector<int>& labels, const std::vector<double>& p_positive,
                                   double threshold) {
    if (labels.size() != p_positive.size()) {
        throw Error("one prediction per label required");
    }
    EvalReport r;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool predicted = p_positive[i] >= threshold;
        const bool actual = labels[i] == 1;
        if (predicted && actual) {
            ++r.true_positive;
        } else if (predicted) {
            ++r.false_positive;
        } else if (actual) {
            ++r.false_negative;
        } else {
            ++r.true_negative;
        }
    }
    const auto tp = static_cast<double>(r.true_positive);
    const std::size_t predicted = r.true_positive + r.false_positive;
    const std::size_t actual = r.true_positive + r.false_negative;
    r.precision = predicted ? tp / static_cast<double>(predicted) : 0.0;
    r.recall = actual ? tp / static_cast<double>(actual) : 0.0;
    r.f_measure = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    return r;
}

EvalReport evaluate(const CnnModel& model, const LabeledDataset& test, double threshold) {
    if (test.empty()) {
        throw ConfigError("test set is empty");
    }
    const auto inputs = encode_items(test);
    const auto probs = kernels::infer_batch_parallel(model, inputs);
    std::vector<double> pos(probs.size());
    std::transform(probs.begin(), probs.end(), pos.begin(), [](const ProbPair& p) { return p.positive; });
    return report_from_predictions(labels_of(test), pos, threshold);
}

DatasetSplit split_dataset(const LabeledDataset& data, std::uint64_t seed) {
    const std::size_t n = data.size();
    if (n < 3) {
        throw ConfigError("need at least 3 labeled items to split");
    }
    const std::size_t test_total = n - (2 * n) / 3;

    std::array<std::vector<std::size_t>, 2> by_label;
    for (std::size_t i = 0; i < n; ++i) {
        by_label[data.items[i].label == 1 ? 1 : 0].push_back(i);
    }
    // Largest-remainder allocation of the test quota across the two labels.
    std::array<std::size_t, 2> quota{};
    std::array<double, 2> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < 2; ++c) {
        const double exact = static_cast<double>(by_label[c].size()) * static_cast<double>(test_total) / static_cast<double>(n);
        quota[c] = static_cast<std::size_t>(std::floor(exact));
        remainder[c] = exact - static_cast<double>(quota[c]);
        assigned += quota[c];
    }
    while (assigned < test_total) {
        const std::size_t c = remainder[1] > remainder[0] ? 1 : 0;
        const std::size_t pick = quota[c] < by_label[c].size() ? c : 1 - c;
        ++quota[pick];
        remainder[pick] = -1.0;
        ++assigned;
    }

    std::mt19937_64 rng(seed);
    std::vector<bool> in_test(n, false);
    for (std::size_t c = 0; c < 2; ++c) {
        auto idx = by_label[c];
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t k = 0; k < quota[c]; ++k) {
            in_test[idx[k]] = true;
        }
    }
    DatasetSplit s;
    s.train.provenance = data.provenance;
    s.test.provenance = data.provenance;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_test[i]) {
            s.test.items.push_back(data.items[i]);
            s.test_indices.push_back(i);
        } else {
            s.train.items.push_back(data.items[i]);
            s.train_indices.push_back(i);
        }
    }
    return s;
}

namespace {

LabeledDataset cold_start_union(const DatasetsByLanguage& datasets, const std::string& target, std::uint64_t seed) {
    if (datasets.contains(target)) {
        throw ConfigError("target language '" + target + "' must not be among the training languages");
    }
    LabeledDataset all;
    all.provenance = "cold-start union";
    for (const auto& [lang, data] : datasets) {
        auto split = split_dataset(data, seed);
        all.items.insert(all.items.end(), split.train.items.begin(), split.train.items.end());
    }
    if (all.empty()) {
        throw ConfigError("no training data outside the target language");
    }
    return all;
}

}  // namespace

ProtocolResult cold_start_train(const DatasetsByLanguage& datasets, const std::string& target_language,
                                std::shared_ptr<const EmbeddingSpace> space, const CnnConfig& cfg,
                                const TrainOptions& opts) {
    LabeledDataset data = cold_start_union(datasets, target_language, opts.seed);
    CnnModel model(cfg, std::move(space), opts.seed);
    TrainResult tr = train(model, data, opts);
    return {std::move(model), std::move(tr), data.size()};
}

ProtocolResult warm_start_train(const DatasetsByLanguage& datasets, const std::string& target_language,
                                const LabeledDataset& target_labels, const LabeledDataset& target_test,
                                std::shared_ptr<const EmbeddingSpace> space, const CnnConfig& cfg,
                                const TrainOptions& opts, std::size_t budget) {
    if (target_labels.size() != budget) {
        throw ConfigError("warm start needs exactly " + std::to_string(budget) + " target-language items, got " +
                          std::to_string(target_labels.size()));
    }
    std::set<std::string> test_texts;
    for (const auto& it : target_test.items) {
        test_texts.insert(it.text);
    }
    for (const auto& it : target_labels.items) {
        if (test_texts.contains(it.text)) {
            throw ConfigError("warm-start item overlaps the fixed test portion: " + it.text);
        }
    }
    LabeledDataset data = cold_start_union(datasets, target_language, opts.seed);
    data.items.insert(data.items.end(), target_labels.items.begin(), target_labels.items.end());
    CnnModel model(cfg, std::move(space), opts.seed);
    TrainResult tr = train(model, data, opts);
    return {std::move(model), std::move(tr), data.size()};
}

GradientCheck check_gradients(const CnnModel& model, std::span<const EncodedText> batch, std::span<const int> labels,
                              double epsilon, std::size_t samples, std::uint64_t seed) {
    const Gradients analytic = model.gradients(batch, labels);

    // Flat view over every checkable scalar.
    struct Slot {
        std::size_t tensor;  ///< 0..5 params, 6 = embedding entry
        std::size_t index;
        std::pair<std::string, std::string> key;
    };
    std::vector<Slot> slots;
    const auto grads = analytic.params.tensors();
    for (std::size_t t = 0; t < grads.size(); ++t) {
        for (std::size_t i = 0; i < grads[t]->size(); ++i) {
            slots.push_back({t, i, {}});
        }
    }
    if (!model.config().frozen_embeddings) {
        for (const auto& [key, g] : analytic.embeddings) {
            for (std::size_t j = 0; j < g.size(); ++j) {
                slots.push_back({6, j, key});
            }
        }
    }
    if (samples < slots.size()) {
        std::mt19937_64 rng(seed);
        std::shuffle(slots.begin(), slots.end(), rng);
        slots.resize(samples);
    }

    CnnModel probe = model;
    std::shared_ptr<EmbeddingSpace> emb;
    if (!model.config().frozen_embeddings) {
        emb = std::make_shared<EmbeddingSpace>(model.embeddings());
        probe.set_embeddings(emb);
    }
    GradientCheck out;
    for (const Slot& s : slots) {
        double* value = nullptr;
        double a = 0.0;
        if (s.tensor < 6) {
            value = &(*probe.params().tensors()[s.tensor])[s.index];
            a = (*grads[s.tensor])[s.index];
        } else {
            value = emb->table_for_mutable(s.key.first).find_mutable(s.key.second) + s.index;
            a = analytic.embeddings.at(s.key)[s.index];
        }
        const double saved = *value;
        *value = saved + epsilon;
        const double up = probe.loss(batch, labels);
        *value = saved - epsilon;
        const double down = probe.loss(batch, labels);
        *value = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
        out.max_relative_error = std::max(out.max_relative_error, std::abs(a - numeric) / denom);
        ++out.checked;
    }
    return out;
}

}  // namespace floodwatch
