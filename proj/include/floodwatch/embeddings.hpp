#pragma once

#include "floodwatch/common.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace floodwatch {

enum class EmbeddingMode { agnostic, aligned };

/// Pretrained word vectors of a fixed dimension. Tokens keep insertion order.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(std::size_t dim, EmbeddingMode mode = EmbeddingMode::agnostic, std::string language = {});

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return tokens_.size(); }
    EmbeddingMode mode() const { return mode_; }
    const std::string& language() const { return language_; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    /// Vector of `token`, or nullptr when out of vocabulary.
    const double* find(const std::string& token) const;
    double* find_mutable(const std::string& token);

    /// Inserts or overwrites. Returns true if the token already existed.
    bool set(const std::string& token, std::span<const double> vec);

    friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b);

private:
    std::size_t dim_ = 0;
    EmbeddingMode mode_ = EmbeddingMode::agnostic;
    std::string language_;
    std::vector<std::string> tokens_;
    std::vector<double> values_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct EmbeddingLoad {
    EmbeddingTable table;
    std::size_t rejected_lines = 0;    ///< wrong component count or non-finite values
    std::size_t duplicate_tokens = 0;  ///< later occurrence kept
};

/// Text format `token v1 ... vD`, one per line; D comes from the first
/// vector line. An optional "count dim" header line is skipped.
/// Throws ConfigError if the file is missing or holds no vectors.
EmbeddingLoad load_embeddings(const std::filesystem::path& path, EmbeddingMode mode = EmbeddingMode::agnostic,
                              const std::string& language = {});
EmbeddingLoad parse_embeddings(std::string_view content, EmbeddingMode mode = EmbeddingMode::agnostic,
                               const std::string& language = {});
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);
std::string serialize_embeddings(const EmbeddingTable& table);

/// Fixed-size S x D input of the classifier; rows past valid_length are zero.
struct SequenceMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t valid_length = 0;
    std::vector<double> values;

    SequenceMatrix() = default;
    SequenceMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

inline constexpr std::size_t kMaxSequenceLength = 100;

/// First min(|tokens|, rows) tokens; OOV tokens map to zero rows.
SequenceMatrix embed_sequence(const std::vector<std::string>& tokens, const EmbeddingTable& table,
                              std::size_t rows = kMaxSequenceLength);

/// Vector lookup for the classifier: a single table (agnostic) or one table
/// per language mapped into a shared space (aligned).
class EmbeddingSpace {
public:
    EmbeddingSpace() = default;
    static EmbeddingSpace agnostic(EmbeddingTable table);
    static EmbeddingSpace aligned(std::map<std::string, EmbeddingTable> tables);

    EmbeddingMode mode() const { return mode_; }
    std::size_t dim() const { return dim_; }
    bool covers(const std::string& language) const;
    std::vector<std::string> languages() const;

    /// Throws ConfigError when an aligned space lacks `language`.
    const EmbeddingTable& table_for(const std::string& language) const;
    EmbeddingTable& table_for_mutable(const std::string& language);

    SequenceMatrix embed(const std::vector<std::string>& tokens, const std::string& language,
                         std::size_t rows = kMaxSequenceLength) const;

    friend bool operator==(const EmbeddingSpace&, const EmbeddingSpace&) = default;

private:
    EmbeddingMode mode_ = EmbeddingMode::agnostic;
    std::size_t dim_ = 0;
    std::map<std::string, EmbeddingTable> tables_;  ///< key "" for agnostic
};

/// Two tables in which each pair (a, b) shares one seeded random unit vector.
/// Throws Error on a repeated token within either side.
std::pair<EmbeddingTable, EmbeddingTable> make_toy_aligned_embeddings(
    const std::vector<std::pair<std::string, std::string>>& word_pairs, std::size_t dim, std::uint64_t seed,
    const std::string& language_a = "a", const std::string& language_b = "b");

}  // namespace floodwatch
