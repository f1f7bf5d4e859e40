#include "floodwatch/levenshtein.hpp"

#include "floodwatch/text.hpp"

#include <algorithm>

namespace floodwatch {

LevenshteinPattern::LevenshteinPattern(std::u32string text) : text_(std::move(text)) {
    words_ = (text_.size() + 63) / 64;
    ascii_slot_.assign(128, -1);
    std::vector<char32_t> others;
    for (char32_t c : text_) {
        if (c >= 128) {
            others.push_back(c);
        }
    }
    std::sort(others.begin(), others.end());
    others.erase(std::unique(others.begin(), others.end()), others.end());
    other_chars_ = others;

    std::int32_t slots = 0;
    for (char32_t c : text_) {
        if (c < 128 && ascii_slot_[c] < 0) {
            ascii_slot_[c] = slots++;
        }
    }
    other_slot_.resize(other_chars_.size());
    for (auto& s : other_slot_) {
        s = slots++;
    }
    masks_.assign(static_cast<std::size_t>(slots) * words_, 0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
        const char32_t c = text_[i];
        std::int32_t slot = 0;
        if (c < 128) {
            slot = ascii_slot_[c];
        } else {
            auto it = std::lower_bound(other_chars_.begin(), other_chars_.end(), c);
            slot = other_slot_[static_cast<std::size_t>(it - other_chars_.begin())];
        }
        masks_[static_cast<std::size_t>(slot) * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
    }
}

const std::uint64_t* LevenshteinPattern::masks_for(char32_t c) const {
    std::int32_t slot = -1;
    if (c < 128) {
        slot = ascii_slot_[c];
    } else {
        auto it = std::lower_bound(other_chars_.begin(), other_chars_.end(), c);
        if (it != other_chars_.end() && *it == c) {
            slot = other_slot_[static_cast<std::size_t>(it - other_chars_.begin())];
        }
    }
    return slot < 0 ? nullptr : masks_.data() + static_cast<std::size_t>(slot) * words_;
}

std::size_t LevenshteinPattern::distance(std::u32string_view other) const {
    const std::size_t m = text_.size();
    if (m == 0) {
        return other.size();
    }
    if (other.empty()) {
        return m;
    }
    std::vector<std::uint64_t> vp(words_, ~std::uint64_t{0});
    std::vector<std::uint64_t> vn(words_, 0);
    const std::uint64_t last = std::uint64_t{1} << ((m - 1) % 64);
    std::size_t dist = m;

    for (char32_t c : other) {
        const std::uint64_t* pm = masks_for(c);
        std::uint64_t hp_carry = 1;
        std::uint64_t hn_carry = 0;
        for (std::size_t w = 0; w < words_; ++w) {
            const std::uint64_t eq = pm ? pm[w] : 0;
            const std::uint64_t x = eq | hn_carry;
            const std::uint64_t d0 = (((x & vp[w]) + vp[w]) ^ vp[w]) | x | vn[w];
            std::uint64_t hp = vn[w] | ~(d0 | vp[w]);
            std::uint64_t hn = d0 & vp[w];
            const std::uint64_t hp_in = hp_carry;
            const std::uint64_t hn_in = hn_carry;
            if (w + 1 < words_) {
                hp_carry = hp >> 63;
                hn_carry = hn >> 63;
            } else {
                hp_carry = (hp & last) ? 1 : 0;
                hn_carry = (hn & last) ? 1 : 0;
            }
            hp = (hp << 1) | hp_in;
            hn = (hn << 1) | hn_in;
            vp[w] = hn | ~(d0 | hp);
            vn[w] = hp & d0;
        }
        dist += hp_carry;
        dist -= hn_carry;
    }
    return dist;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
    if (a.size() < b.size()) {
        std::swap(a, b);
    }
    // Shorter string as the pattern keeps the block count low.
    return LevenshteinPattern(std::u32string(b)).distance(a);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    return edit_distance(std::u32string_view(text::decode_utf8(a)), std::u32string_view(text::decode_utf8(b)));
}

std::size_t edit_distance(const LevenshteinPattern& a, const LevenshteinPattern& b) {
    const std::size_t cost_a = a.words() * b.size();
    const std::size_t cost_b = b.words() * a.size();
    return cost_a <= cost_b ? a.distance(b.text()) : b.distance(a.text());
}

double similarity_from_distance(std::size_t distance, std::size_t len_a, std::size_t len_b) {
    const std::size_t total = len_a + len_b;
    if (total == 0) {
        return 1.0;
    }
    return 1.0 - static_cast<double>(distance) / static_cast<double>(total);
}

double normalized_similarity(const LevenshteinPattern& a, const LevenshteinPattern& b) {
    return similarity_from_distance(edit_distance(a, b), a.size(), b.size());
}

double normalized_similarity(std::string_view m1, std::string_view m2) {
    LevenshteinPattern a(text::normalize_for_similarity(m1));
    LevenshteinPattern b(text::normalize_for_similarity(m2));
    return normalized_similarity(a, b);
}

}  // namespace floodwatch
