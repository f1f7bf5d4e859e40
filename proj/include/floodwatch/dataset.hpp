#pragma once

#include "floodwatch/cnn.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace floodwatch {

struct LabeledItem {
    std::string text;
    std::string language;
    int label = 0;  ///< 1 = a flood has just happened or is about to happen

    friend bool operator==(const LabeledItem&, const LabeledItem&) = default;
};

struct LabeledDataset {
    std::vector<LabeledItem> items;
    std::string provenance;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
    std::size_t positives() const;
};

/// Tab-separated `text  language  label` with an optional header row. The
/// last two columns are split off from the right, so text may hold tabs;
/// "\n", "\t" and "\\" escapes are decoded.
LabeledDataset parse_dataset(std::string_view content, std::string provenance = {});
LabeledDataset load_dataset(const std::filesystem::path& path);
void save_dataset(const LabeledDataset& data, const std::filesystem::path& path);

/// Classifier input for a raw text: tokenized and tagged with its language.
EncodedText encode_text(std::string_view text, const std::string& language);
std::vector<EncodedText> encode_items(const LabeledDataset& data);
std::vector<int> labels_of(const LabeledDataset& data);

}  // namespace floodwatch
