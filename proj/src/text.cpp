#include "floodwatch/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>

namespace floodwatch::text {

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    const auto* p = reinterpret_cast<const uint8_t*>(s.data());
    int32_t i = 0;
    const auto n = static_cast<int32_t>(s.size());
    while (i < n) {
        UChar32 c;
        U8_NEXT(p, i, n, c);
        out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
    }
    return out;
}

std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t c : s) {
        uint8_t buf[4];
        int32_t len = 0;
        UBool err = false;
        U8_APPEND(buf, len, 4, static_cast<UChar32>(c), err);
        if (err) {
            len = 0;
            U8_APPEND_UNSAFE(buf, len, 0xFFFD);
        }
        out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
    }
    return out;
}

std::size_t code_point_count(std::string_view s) {
    return decode_utf8(s).size();
}

bool is_word_char(char32_t c) {
    auto u = static_cast<UChar32>(c);
    if (c < 0x80) {
        return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
    }
    return u_hasBinaryProperty(u, UCHAR_ALPHABETIC) || u_isdigit(u) ||
           (U_GET_GC_MASK(u) & U_GC_M_MASK) != 0;
}

bool is_space(char32_t c) {
    return u_isUWhiteSpace(static_cast<UChar32>(c));
}

std::string to_lower(std::string_view s) {
    std::u32string cps = decode_utf8(s);
    for (auto& c : cps) {
        c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
    }
    return encode_utf8(cps);
}

namespace {

bool starts_with_ci(const std::u32string& s, std::size_t pos, std::u32string_view prefix) {
    if (pos + prefix.size() > s.size()) {
        return false;
    }
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (u_tolower(static_cast<UChar32>(s[pos + i])) != static_cast<UChar32>(prefix[i])) {
            return false;
        }
    }
    return true;
}

bool url_at(const std::u32string& s, std::size_t pos) {
    return starts_with_ci(s, pos, U"http://") || starts_with_ci(s, pos, U"https://") ||
           starts_with_ci(s, pos, U"www.");
}

std::size_t skip_non_space(const std::u32string& s, std::size_t pos) {
    while (pos < s.size() && !is_space(s[pos])) {
        ++pos;
    }
    return pos;
}

bool at_token_start(const std::u32string& s, std::size_t pos) {
    return pos == 0 || !is_word_char(s[pos - 1]);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view input) {
    const std::u32string s = decode_utf8(input);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        char32_t c = s[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        if (at_token_start(s, i) && url_at(s, i)) {
            tokens.emplace_back(kUrlToken);
            i = skip_non_space(s, i);
            continue;
        }
        if (c == U'@' && at_token_start(s, i) && i + 1 < s.size() &&
            (is_word_char(s[i + 1]) || s[i + 1] == U'_')) {
            ++i;
            while (i < s.size() && (is_word_char(s[i]) || s[i] == U'_')) {
                ++i;
            }
            tokens.emplace_back(kUserToken);
            continue;
        }
        if (is_word_char(c)) {
            std::u32string word;
            while (i < s.size() && is_word_char(s[i])) {
                word.push_back(static_cast<char32_t>(u_tolower(static_cast<UChar32>(s[i]))));
                ++i;
            }
            tokens.push_back(encode_utf8(word));
            continue;
        }
        ++i;  // punctuation, including '#'
    }
    return tokens;
}

std::u32string normalize_for_similarity(std::string_view input) {
    const std::u32string s = decode_utf8(input);
    std::u32string out;
    out.reserve(s.size());
    bool pending_space = false;
    std::size_t i = 0;
    while (i < s.size()) {
        if (is_space(s[i])) {
            pending_space = !out.empty();
            ++i;
            continue;
        }
        if (pending_space) {
            out.push_back(U' ');
            pending_space = false;
        }
        if (at_token_start(s, i) && url_at(s, i)) {
            out += U"<url>";
            i = skip_non_space(s, i);
            continue;
        }
        out.push_back(static_cast<char32_t>(u_foldCase(static_cast<UChar32>(s[i]), U_FOLD_CASE_DEFAULT)));
        ++i;
    }
    return out;
}

bool PhraseIndex::add(std::string_view phrase, std::size_t id) {
    std::vector<std::string> toks = tokenize(phrase);
    std::erase_if(toks, [](const std::string& t) { return t == kUrlToken || t == kUserToken; });
    if (toks.empty()) {
        return false;
    }
    lengths_[id] = toks.size();
    std::string first = toks.front();
    by_first_[first].push_back(Entry{std::move(toks), id});
    return true;
}

std::vector<PhraseIndex::Hit> PhraseIndex::find_all(const std::vector<std::string>& tokens) const {
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto it = by_first_.find(tokens[i]);
        if (it == by_first_.end()) {
            continue;
        }
        for (const Entry& e : it->second) {
            if (i + e.tokens.size() > tokens.size()) {
                continue;
            }
            if (std::equal(e.tokens.begin(), e.tokens.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
                hits.push_back({e.id, i});
            }
        }
    }
    return hits;
}

}  // namespace floodwatch::text
