#pragma once

#include "floodwatch/embeddings.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace floodwatch {

/// Architecture of the relevance classifier: embedded tokens -> convolution
/// of width `conv_width` with `filters` maps -> ReLU -> max over disjoint
/// windows of `pool_window` positions, then max over windows -> dense ReLU
/// layer -> two-way softmax.
struct CnnConfig {
    std::size_t seq_len = kMaxSequenceLength;
    std::size_t conv_width = 5;
    std::size_t filters = 128;
    std::size_t pool_window = 5;
    std::size_t hidden = 64;
    bool frozen_embeddings = true;

    void validate() const;
    std::size_t positions() const { return seq_len - conv_width + 1; }
    std::size_t windows() const { return (positions() + pool_window - 1) / pool_window; }

    friend bool operator==(const CnnConfig&, const CnnConfig&) = default;
};

/// (p_negative, p_positive); p_positive is the flood-relevance probability.
struct ProbPair {
    double negative = 0.5;
    double positive = 0.5;

    friend bool operator==(const ProbPair&, const ProbPair&) = default;
};

/// Tokenized text plus the language used to pick an aligned table.
struct EncodedText {
    std::vector<std::string> tokens;
    std::string language;
};

struct CnnParams {
    std::vector<double> conv_w;   ///< filters x (conv_width * dim), row offset major
    std::vector<double> conv_b;   ///< filters
    std::vector<double> dense_w;  ///< hidden x filters
    std::vector<double> dense_b;  ///< hidden
    std::vector<double> out_w;    ///< 2 x hidden
    std::vector<double> out_b;    ///< 2

    static constexpr std::array<const char*, 6> kNames{"conv_w", "conv_b", "dense_w", "dense_b", "out_w", "out_b"};
    std::array<std::vector<double>*, 6> tensors() { return {&conv_w, &conv_b, &dense_w, &dense_b, &out_w, &out_b}; }
    std::array<const std::vector<double>*, 6> tensors() const {
        return {&conv_w, &conv_b, &dense_w, &dense_b, &out_w, &out_b};
    }
    std::size_t size() const;
    bool all_finite() const;

    friend bool operator==(const CnnParams&, const CnnParams&) = default;
};

/// Intermediate values of one forward pass.
struct ForwardTrace {
    std::vector<double> conv_pre;     ///< filters x positions, before ReLU
    std::vector<double> window_max;   ///< filters x windows, after ReLU
    std::vector<double> pooled;       ///< filters
    std::vector<std::size_t> argmax;  ///< filters: position feeding pooled[f]
    std::vector<double> hidden_pre;   ///< hidden
    std::vector<double> hidden;       ///< hidden
    std::array<double, 2> logits{};
    ProbPair probs;
};

/// Embedding-row gradients keyed by (language, token); empty when frozen.
using EmbeddingGrads = std::map<std::pair<std::string, std::string>, std::vector<double>>;

struct Gradients {
    CnnParams params;
    EmbeddingGrads embeddings;
};

class CnnModel {
public:
    CnnModel(CnnConfig cfg, std::shared_ptr<const EmbeddingSpace> embeddings, std::uint64_t seed);

    const CnnConfig& config() const { return cfg_; }
    std::size_t dim() const { return embeddings_->dim(); }
    const CnnParams& params() const { return params_; }
    CnnParams& params() { return params_; }
    const EmbeddingSpace& embeddings() const { return *embeddings_; }
    std::shared_ptr<const EmbeddingSpace> embeddings_ptr() const { return embeddings_; }

    /// Replaces the model's private embedding copy (used by fine-tuning).
    void set_embeddings(std::shared_ptr<const EmbeddingSpace> space);

    SequenceMatrix encode(const EncodedText& input) const;

    /// Throws Error when the matrix shape does not match the model.
    ProbPair forward(const SequenceMatrix& x) const;
    ForwardTrace forward_trace(const SequenceMatrix& x) const;
    ProbPair classify(const EncodedText& input) const { return forward(encode(input)); }

    /// Mean cross-entropy of a batch; labels are 1 for positive.
    double loss(std::span<const EncodedText> batch, std::span<const int> labels) const;

    /// Gradient of the mean batch loss. Embedding gradients are filled only
    /// for unfrozen models.
    Gradients gradients(std::span<const EncodedText> batch, std::span<const int> labels, double* loss_out = nullptr) const;

    /// Versioned text container. Frozen models store no vectors and need the
    /// embedding space at load time; unfrozen models carry their tuned tables.
    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static CnnModel load(std::istream& in, std::shared_ptr<const EmbeddingSpace> embeddings);
    static CnnModel load(const std::filesystem::path& path, std::shared_ptr<const EmbeddingSpace> embeddings);

private:
    CnnModel() = default;
    void check_shape(const SequenceMatrix& x) const;
    /// Adds this item's gradient scaled by `scale`; returns the item loss.
    double backprop(const SequenceMatrix& x, const EncodedText& input, int label, double scale, Gradients& g) const;

    CnnConfig cfg_;
    std::shared_ptr<const EmbeddingSpace> embeddings_;
    CnnParams params_;
};

/// Zeroed gradient buffers shaped like `model`.
Gradients zero_gradients(const CnnModel& model);

}  // namespace floodwatch
