#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace floodwatch::text {

inline constexpr std::string_view kUrlToken = "<url>";
inline constexpr std::string_view kUserToken = "<user>";

/// Decodes UTF-8; ill-formed sequences become U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

/// Number of code points in a UTF-8 string.
std::size_t code_point_count(std::string_view s);

/// Letters, digits and combining marks.
bool is_word_char(char32_t c);
bool is_space(char32_t c);

/// Lowercases every code point (simple case mapping).
std::string to_lower(std::string_view s);

/// Lowercased word tokens. URLs become "<url>", @mentions "<user>", a
/// leading '#' is dropped, and every other non-word code point separates.
std::vector<std::string> tokenize(std::string_view text);

/// Text form used for near-duplicate comparison: case-folded, URLs replaced
/// by "<url>", whitespace runs collapsed to one space, ends trimmed.
std::u32string normalize_for_similarity(std::string_view text);

/// Index of multi-token phrases for whole-word lookup in token streams.
/// Placeholder tokens ("<url>", "<user>") never match a phrase.
class PhraseIndex {
public:
    struct Hit {
        std::size_t phrase;  ///< id passed to add()
        std::size_t start;   ///< token offset in the searched sequence
    };

    /// Registers the tokenized form of `phrase`. Returns false if the phrase
    /// has no word tokens (it can never match).
    bool add(std::string_view phrase, std::size_t id);

    std::vector<Hit> find_all(const std::vector<std::string>& tokens) const;

    /// Token length of a registered phrase id.
    std::size_t length(std::size_t id) const { return lengths_.at(id); }

private:
    struct Entry {
        std::vector<std::string> tokens;
        std::size_t id;
    };
    std::unordered_map<std::string, std::vector<Entry>> by_first_;
    std::unordered_map<std::size_t, std::size_t> lengths_;
};

}  // namespace floodwatch::text
