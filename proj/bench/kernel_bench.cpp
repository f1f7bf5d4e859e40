// Serial vs OpenMP kernels on synthetic inputs.

#include "floodwatch/cnn.hpp"
#include "floodwatch/dataset.hpp"
#include "floodwatch/kernels.hpp"
#include "floodwatch/levenshtein.hpp"
#include "floodwatch/router.hpp"
#include "floodwatch/scenario.hpp"
#include "floodwatch/text.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace floodwatch;

namespace {

StreamQuery bench_query() {
    StreamQuery q;
    for (int i = 0; i < 400; ++i) {
        q.keywords.push_back({"city" + std::to_string(i), 1000 - i, {"E" + std::to_string(i % 20)}});
    }
    for (int i = 0; i < 25; ++i) {
        q.boxes.push_back({{30.0 + i, 5.0, 31.0 + i, 6.5}, {"E" + std::to_string(i % 20)}});
    }
    return q;
}

std::vector<Message> bench_messages(std::size_t n) {
    std::mt19937_64 rng(1);
    std::vector<Message> out;
    for (std::size_t i = 0; i < n; ++i) {
        Message m;
        m.id = std::to_string(i);
        m.text = "heavy rain near city" + std::to_string(rng() % 800) + " river is rising fast #flood";
        if (i % 3 == 0) {
            m.coords = LatLon{30.0 + static_cast<double>(rng() % 3000) / 100.0, 5.5};
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<LevenshteinPattern> bench_patterns(std::size_t n) {
    std::mt19937_64 rng(2);
    std::vector<LevenshteinPattern> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::string s;
        const std::size_t len = 60 + rng() % 80;
        for (std::size_t k = 0; k < len; ++k) {
            s += static_cast<char>('a' + rng() % 6);
        }
        out.emplace_back(text::normalize_for_similarity(s));
    }
    return out;
}

void BM_Match(benchmark::State& state, bool parallel) {
    const auto q = bench_query();
    const QueryMatcher matcher(q);
    const auto msgs = bench_messages(20000);
    for (auto _ : state) {
        auto r = parallel ? kernels::match_batch_parallel(matcher, msgs) : kernels::match_batch_serial(matcher, msgs);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(msgs.size()));
}

void BM_Locate(benchmark::State& state, bool parallel) {
    const AreaSet areas = scenario_areas();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> lat(37.5, 41.8), lon(13.5, 17.5);
    std::vector<LatLon> pts(100000);
    for (auto& p : pts) {
        p = {lat(rng), lon(rng)};
    }
    for (auto _ : state) {
        auto r = parallel ? kernels::locate_batch_parallel(areas, pts) : kernels::locate_batch_serial(areas, pts);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

void BM_Similarity(benchmark::State& state, bool parallel) {
    const auto pats = bench_patterns(100);
    for (auto _ : state) {
        auto r = parallel ? kernels::similarity_matrix_parallel(pats) : kernels::similarity_matrix_serial(pats);
        benchmark::DoNotOptimize(r);
    }
}

void BM_NearDuplicates(benchmark::State& state, bool parallel) {
    const auto pats = bench_patterns(3000);
    std::vector<double> conf(pats.size());
    for (std::size_t i = 0; i < conf.size(); ++i) {
        conf[i] = 0.9 + static_cast<double>(i) * 0.00002;
    }
    for (auto _ : state) {
        auto r = parallel ? kernels::near_duplicate_pairs_parallel(pats, conf, 0.0001, 0.8)
                          : kernels::near_duplicate_pairs_serial(pats, conf, 0.0001, 0.8);
        benchmark::DoNotOptimize(r);
    }
}

void BM_Inference(benchmark::State& state, bool parallel) {
    auto [en, it] = make_toy_aligned_embeddings(toy_word_pairs(), 16, 4, "en", "it");
    auto space = std::make_shared<const EmbeddingSpace>(EmbeddingSpace::agnostic(std::move(en)));
    const CnnModel model(CnnConfig{}, space, 5);
    const auto corpus = make_toy_corpus(256, 6);
    const auto inputs = encode_items(corpus.en);
    for (auto _ : state) {
        auto r = parallel ? kernels::infer_batch_parallel(model, inputs) : kernels::infer_batch_serial(model, inputs);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(inputs.size()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Match, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Match, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Locate, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Locate, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Similarity, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Similarity, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_NearDuplicates, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_NearDuplicates, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Inference, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Inference, parallel, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
