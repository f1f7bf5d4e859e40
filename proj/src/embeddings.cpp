#include "floodwatch/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace floodwatch {

EmbeddingTable::EmbeddingTable(std::size_t dim, EmbeddingMode mode, std::string language)
    : dim_(dim), mode_(mode), language_(std::move(language)) {
    if (dim == 0) {
        throw ConfigError("embedding dimension must be positive");
    }
}

const double* EmbeddingTable::find(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? nullptr : values_.data() + it->second * dim_;
}

double* EmbeddingTable::find_mutable(const std::string& token) {
    auto it = index_.find(token);
    return it == index_.end() ? nullptr : values_.data() + it->second * dim_;
}

bool EmbeddingTable::set(const std::string& token, std::span<const double> vec) {
    if (vec.size() != dim_) {
        throw Error("vector for '" + token + "' has " + std::to_string(vec.size()) + " components, expected " +
                    std::to_string(dim_));
    }
    for (double v : vec) {
        if (!std::isfinite(v)) {
            throw Error("non-finite component in vector for '" + token + "'");
        }
    }
    auto [it, inserted] = index_.emplace(token, tokens_.size());
    if (inserted) {
        tokens_.push_back(token);
        values_.insert(values_.end(), vec.begin(), vec.end());
    } else {
        std::copy(vec.begin(), vec.end(), values_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
    }
    return !inserted;
}

bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dim_ == b.dim_ && a.mode_ == b.mode_ && a.language_ == b.language_ && a.tokens_ == b.tokens_ &&
           a.values_ == b.values_;
}

namespace {

std::vector<std::string_view> fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
            ++i;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

bool parse_double(std::string_view s, double& v) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(v);
}

bool is_integer(std::string_view s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

}  // namespace

EmbeddingLoad parse_embeddings(std::string_view content, EmbeddingMode mode, const std::string& language) {
    EmbeddingLoad out;
    bool first = true;
    std::size_t dim = 0;
    std::vector<double> vec;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        std::string_view line = content.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? content.size() : end + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        auto f = fields(line);
        if (f.empty()) {
            continue;
        }
        if (first) {
            first = false;
            if (f.size() == 2 && is_integer(f[0]) && is_integer(f[1])) {
                continue;  // "count dim" header
            }
        }
        if (dim == 0) {
            if (f.size() < 2) {
                throw ConfigError("first embedding line has no vector components");
            }
            dim = f.size() - 1;
            out.table = EmbeddingTable(dim, mode, language);
        }
        if (f.size() != dim + 1) {
            ++out.rejected_lines;
            continue;
        }
        vec.assign(dim, 0.0);
        bool ok = true;
        for (std::size_t k = 0; k < dim && ok; ++k) {
            ok = parse_double(f[k + 1], vec[k]);
        }
        if (!ok) {
            ++out.rejected_lines;
            continue;
        }
        if (out.table.set(std::string(f[0]), vec)) {
            ++out.duplicate_tokens;
        }
    }
    if (dim == 0) {
        throw ConfigError("embedding file holds no vectors");
    }
    return out;
}

EmbeddingLoad load_embeddings(const std::filesystem::path& path, EmbeddingMode mode, const std::string& language) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open embeddings " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_embeddings(ss.str(), mode, language);
}

std::string serialize_embeddings(const EmbeddingTable& table) {
    std::string out;
    char buf[32];
    for (const auto& token : table.tokens()) {
        out += token;
        const double* v = table.find(token);
        for (std::size_t k = 0; k < table.dim(); ++k) {
            auto res = std::to_chars(buf, buf + sizeof buf, v[k]);
            out.push_back(' ');
            out.append(buf, res.ptr);
        }
        out.push_back('\n');
    }
    return out;
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write embeddings " + path.string());
    }
    out << serialize_embeddings(table);
}

SequenceMatrix embed_sequence(const std::vector<std::string>& tokens, const EmbeddingTable& table, std::size_t rows) {
    SequenceMatrix m(rows, table.dim());
    m.valid_length = std::min(tokens.size(), rows);
    for (std::size_t i = 0; i < m.valid_length; ++i) {
        if (const double* v = table.find(tokens[i])) {
            std::copy(v, v + table.dim(), m.row(i).begin());
        }
    }
    return m;
}

EmbeddingSpace EmbeddingSpace::agnostic(EmbeddingTable table) {
    EmbeddingSpace s;
    s.mode_ = EmbeddingMode::agnostic;
    s.dim_ = table.dim();
    s.tables_.emplace("", std::move(table));
    return s;
}

EmbeddingSpace EmbeddingSpace::aligned(std::map<std::string, EmbeddingTable> tables) {
    if (tables.empty()) {
        throw ConfigError("aligned embedding space needs at least one language");
    }
    EmbeddingSpace s;
    s.mode_ = EmbeddingMode::aligned;
    s.dim_ = tables.begin()->second.dim();
    for (const auto& [lang, t] : tables) {
        if (t.dim() != s.dim_) {
            throw ConfigError("aligned tables disagree on dimension (" + lang + ")");
        }
    }
    s.tables_ = std::move(tables);
    return s;
}

bool EmbeddingSpace::covers(const std::string& language) const {
    return mode_ == EmbeddingMode::agnostic || tables_.contains(language);
}

std::vector<std::string> EmbeddingSpace::languages() const {
    std::vector<std::string> out;
    for (const auto& [lang, t] : tables_) {
        out.push_back(lang);
    }
    return out;
}

const EmbeddingTable& EmbeddingSpace::table_for(const std::string& language) const {
    if (tables_.empty()) {
        throw ConfigError("empty embedding space");
    }
    if (mode_ == EmbeddingMode::agnostic) {
        return tables_.begin()->second;
    }
    auto it = tables_.find(language);
    if (it == tables_.end()) {
        throw ConfigError("no aligned embeddings for language '" + language + "'");
    }
    return it->second;
}

EmbeddingTable& EmbeddingSpace::table_for_mutable(const std::string& language) {
    return const_cast<EmbeddingTable&>(std::as_const(*this).table_for(language));
}

SequenceMatrix EmbeddingSpace::embed(const std::vector<std::string>& tokens, const std::string& language,
                                     std::size_t rows) const {
    return embed_sequence(tokens, table_for(language), rows);
}

std::pair<EmbeddingTable, EmbeddingTable> make_toy_aligned_embeddings(
    const std::vector<std::pair<std::string, std::string>>& word_pairs, std::size_t dim, std::uint64_t seed,
    const std::string& language_a, const std::string& language_b) {
    std::set<std::string> seen_a, seen_b;
    for (const auto& [a, b] : word_pairs) {
        if (!seen_a.insert(a).second) {
            throw Error("duplicate token '" + a + "' in first language");
        }
        if (!seen_b.insert(b).second) {
            throw Error("duplicate token '" + b + "' in second language");
        }
    }
    EmbeddingTable ta(dim, EmbeddingMode::aligned, language_a);
    EmbeddingTable tb(dim, EmbeddingMode::aligned, language_b);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(dim);
    for (const auto& [a, b] : word_pairs) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& x : v) {
                x = normal(rng);
                norm += x * x;
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        for (auto& x : v) {
            x /= norm;
        }
        ta.set(a, v);
        tb.set(b, v);
    }
    return {std::move(ta), std::move(tb)};
}

}  // namespace floodwatch
