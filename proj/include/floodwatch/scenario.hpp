#pragma once

#include "floodwatch/dataset.hpp"
#include "floodwatch/gazetteer.hpp"
#include "floodwatch/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace floodwatch {

/// English/Italian word pairs of the toy vocabulary.
const std::vector<std::pair<std::string, std::string>>& toy_word_pairs();

/// Two labeled corpora that are word-for-word translations of each other
/// (same labels, same order). Flood vocabulary appears only in positives.
struct ToyCorpus {
    LabeledDataset en;
    LabeledDataset it;
};

/// `items` distinct sentences per language, half of them positive.
ToyCorpus make_toy_corpus(std::size_t items, std::uint64_t seed);

/// Word-for-word translation of an English toy sentence.
std::string translate_toy_sentence(const std::string& en);

/// Simplified polygons of ITF6 (Calabria) and ITF3 (Campania, with an
/// island part and a hole).
AreaSet scenario_areas();
Gazetteer scenario_gazetteer();

struct ScenarioOptions {
    std::uint64_t seed = 7;
    std::size_t messages = 1000;
    std::size_t embedding_dim = 16;
    std::size_t training_items = 300;  ///< per language
    int training_epochs = 25;
};

struct ScenarioFiles {
    std::filesystem::path dir;
    std::filesystem::path config;
    std::filesystem::path forecasts;
    std::filesystem::path messages;
    std::filesystem::path polygons;
    std::filesystem::path gazetteer;
    std::filesystem::path model;
    std::map<std::string, std::filesystem::path> embeddings;
    std::map<std::string, std::filesystem::path> datasets;
};

/// Writes the complete synthetic scenario (inputs, toy embeddings, labeled
/// corpora, trained toy model and a config whose state dir is `state`).
/// Identical options give byte-identical files.
ScenarioFiles write_scenario(const std::filesystem::path& dir, const ScenarioOptions& options = {});

}  // namespace floodwatch
