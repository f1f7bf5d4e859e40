#pragma once

#include "floodwatch/cnn.hpp"
#include "floodwatch/dataset.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace floodwatch {

/// Minibatch SGD with momentum on mean cross-entropy.
struct TrainOptions {
    int epochs = 15;
    std::uint64_t seed = 1;
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t batch_size = 32;

    void validate() const;
};

struct TrainResult {
    std::vector<double> loss_curve;      ///< full training-set cross-entropy after each epoch
    std::vector<double> accuracy_curve;  ///< training accuracy (threshold 0.5) after each epoch
};

class TrainingError : public StageError {
public:
    using StageError::StageError;
};

/// Trains in place. Frozen embeddings are never touched; unfrozen ones are
/// tuned in a private copy. Single-threaded and deterministic under `seed`.
/// Throws TrainingError on a non-finite loss or parameter.
TrainResult train(CnnModel& model, const LabeledDataset& data, const TrainOptions& opts);

struct EvalReport {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t true_negative = 0;
    std::size_t false_negative = 0;
    double precision = 0.0;  ///< 0 when nothing is predicted positive
    double recall = 0.0;
    double f_measure = 0.0;

    std::size_t total() const { return true_positive + false_positive + true_negative + false_negative; }
};

EvalReport report_from_predictions(const std::vector<int>& labels, const std::vector<double>& p_positive,
                                   double threshold = 0.5);

/// Positive prediction iff p_positive >= threshold.
EvalReport evaluate(const CnnModel& model, const LabeledDataset& test, double threshold = 0.5);

struct DatasetSplit {
    LabeledDataset train;
    LabeledDataset test;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/// Stratified split: floor(2n/3) items train, the rest test. Depends only on
/// the label sequence and the seed. Throws ConfigError for fewer than 3 items.
DatasetSplit split_dataset(const LabeledDataset& data, std::uint64_t seed);

struct ProtocolResult {
    CnnModel model;
    TrainResult training;
    std::size_t training_size = 0;
};

using DatasetsByLanguage = std::map<std::string, LabeledDataset>;

/// Trains on the union (language order) of the training portions of every
/// dataset; the target language must not be among them.
ProtocolResult cold_start_train(const DatasetsByLanguage& datasets, const std::string& target_language,
                                std::shared_ptr<const EmbeddingSpace> space, const CnnConfig& cfg,
                                const TrainOptions& opts);

inline constexpr std::size_t kWarmStartBudget = 300;

/// Cold-start union plus exactly `budget` target-language items, which must
/// not overlap the fixed target test portion.
ProtocolResult warm_start_train(const DatasetsByLanguage& datasets, const std::string& target_language,
                                const LabeledDataset& target_labels, const LabeledDataset& target_test,
                                std::shared_ptr<const EmbeddingSpace> space, const CnnConfig& cfg,
                                const TrainOptions& opts, std::size_t budget = kWarmStartBudget);

struct GradientCheck {
    double max_relative_error = 0.0;
    std::size_t checked = 0;
};

/// Analytic vs central-difference gradients of the mean batch loss on a
/// seeded sample of parameters (all of them if `samples` covers the count).
/// Frozen embeddings are excluded; tuned embedding entries are included.
/// Relative error is |a - n| / max(|a|, |n|, 1e-6).
GradientCheck check_gradients(const CnnModel& model, std::span<const EncodedText> batch, std::span<const int> labels,
                              double epsilon = 1e-5, std::size_t samples = 256, std::uint64_t seed = 7);

}  // namespace floodwatch
