#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace floodwatch {

/// A code-point string with precomputed match bitmasks for the bit-parallel
/// (Myers/Hyyrö) Levenshtein recurrence. Build once, compare many times.
class LevenshteinPattern {
public:
    LevenshteinPattern() = default;
    explicit LevenshteinPattern(std::u32string text);

    const std::u32string& text() const { return text_; }
    std::size_t size() const { return text_.size(); }
    std::size_t words() const { return words_; }

    /// Unit-cost insert/delete/substitute distance to `other`.
    std::size_t distance(std::u32string_view other) const;

private:
    const std::uint64_t* masks_for(char32_t c) const;

    std::u32string text_;
    std::size_t words_ = 0;
    std::vector<std::int32_t> ascii_slot_;  ///< 128 entries, -1 when absent
    std::vector<char32_t> other_chars_;     ///< sorted non-ASCII alphabet
    std::vector<std::int32_t> other_slot_;
    std::vector<std::uint64_t> masks_;      ///< slot-major, words_ per slot
};

std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// Levenshtein distance between the code-point sequences of two UTF-8 strings.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Distance between two prepared patterns, running the cheaper direction.
std::size_t edit_distance(const LevenshteinPattern& a, const LevenshteinPattern& b);

/// 1 - distance / (|a| + |b|) over code points; 1 for two empty strings.
double similarity_from_distance(std::size_t distance, std::size_t len_a, std::size_t len_b);
double normalized_similarity(const LevenshteinPattern& a, const LevenshteinPattern& b);

/// Similarity of two raw messages after normalization (case-folded, URLs
/// replaced, whitespace collapsed).
double normalized_similarity(std::string_view m1, std::string_view m2);

}  // namespace floodwatch
