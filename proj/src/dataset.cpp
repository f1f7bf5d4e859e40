#include "floodwatch/dataset.hpp"

#include "floodwatch/text.hpp"

#include <fstream>
#include <sstream>

namespace floodwatch {

std::size_t LabeledDataset::positives() const {
    std::size_t n = 0;
    for (const auto& it : items) {
        n += it.label == 1 ? 1 : 0;
    }
    return n;
}

namespace {

std::string unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            char c = s[++i];
            out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\\': out += "\\\\"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

LabeledDataset parse_dataset(std::string_view content, std::string provenance) {
    LabeledDataset data;
    data.provenance = std::move(provenance);
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        std::string_view line = content.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? content.size() : end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        auto t2 = line.rfind('\t');
        auto t1 = t2 == std::string_view::npos || t2 == 0 ? std::string_view::npos : line.rfind('\t', t2 - 1);
        if (t1 == std::string_view::npos) {
            throw ConfigError("dataset line " + std::to_string(line_no) + ": expected text, language, label");
        }
        std::string_view label = line.substr(t2 + 1);
        if (line_no == 1 && label == "label") {
            continue;
        }
        if (label != "0" && label != "1") {
            throw ConfigError("dataset line " + std::to_string(line_no) + ": label must be 0 or 1");
        }
        data.items.push_back({unescape(line.substr(0, t1)), std::string(line.substr(t1 + 1, t2 - t1 - 1)),
                              label == "1" ? 1 : 0});
    }
    return data;
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open dataset " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dataset(ss.str(), path.string());
}

void save_dataset(const LabeledDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write dataset " + path.string());
    }
    out << "text\tlanguage\tlabel\n";
    for (const auto& it : data.items) {
        out << escape(it.text) << '\t' << it.language << '\t' << it.label << '\n';
    }
}

EncodedText encode_text(std::string_view text, const std::string& language) {
    return {text::tokenize(text), language};
}

std::vector<EncodedText> encode_items(const LabeledDataset& data) {
    std::vector<EncodedText> out;
    out.reserve(data.size());
    for (const auto& it : data.items) {
        out.push_back(encode_text(it.text, it.language));
    }
    return out;
}

std::vector<int> labels_of(const LabeledDataset& data) {
    std::vector<int> out;
    out.reserve(data.size());
    for (const auto& it : data.items) {
        out.push_back(it.label);
    }
    return out;
}

}  // namespace floodwatch
