#include "floodwatch/selection.hpp"

#include "floodwatch/kernels.hpp"
#include "floodwatch/text.hpp"

#include <algorithm>
#include <numeric>

namespace floodwatch {

void SelectionConfig::validate() const {
    if (!(min_probability > 0.0 && min_probability <= 1.0)) {
        throw ConfigError("min_probability must be in (0, 1]");
    }
    if (pool_cap == 0 || top_unique == 0) {
        throw ConfigError("pool_cap and top_unique must be positive");
    }
    if (!(dup_similarity > 0.0 && dup_similarity < 1.0)) {
        throw ConfigError("dup_similarity must be in (0, 1)");
    }
    if (prob_bucket < 0.0) {
        throw ConfigError("prob_bucket must be non-negative");
    }
}

nlohmann::json to_json(const RepresentativeTweet& r) {
    auto j = to_json(r.message);
    j["confidence"] = r.confidence;
    j["multiplicity"] = r.multiplicity;
    j["centrality"] = r.centrality;
    j["rank"] = r.rank;
    return j;
}

RepresentativeTweet representative_from_json(const nlohmann::json& j) {
    return {message_from_json(j), j.at("confidence").get<double>(), j.at("multiplicity").get<std::size_t>(),
            j.at("centrality").get<double>(), j.at("rank").get<std::size_t>()};
}

std::vector<ClassifiedMessage> candidate_pool(std::span<const ClassifiedMessage> classified,
                                              const SelectionConfig& cfg) {
    std::vector<ClassifiedMessage> pool;
    for (const auto& c : classified) {
        if (c.confidence >= cfg.min_probability) {
            pool.push_back(c);
        }
    }
    std::sort(pool.begin(), pool.end(), [](const ClassifiedMessage& a, const ClassifiedMessage& b) {
        if (a.confidence != b.confidence) {
            return a.confidence > b.confidence;
        }
        return older_first(a.message, b.message);
    });
    if (pool.size() > cfg.pool_cap) {
        pool.resize(cfg.pool_cap);
    }
    return pool;
}

namespace {

/// Union-find whose representative is always the oldest member.
class OldestRoot {
public:
    explicit OldestRoot(std::span<const ClassifiedMessage> pool) : pool_(pool), parent_(pool.size()) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        if (older_first(pool_[b].message, pool_[a].message)) {
            std::swap(a, b);
        }
        parent_[b] = a;
    }

private:
    std::span<const ClassifiedMessage> pool_;
    std::vector<std::size_t> parent_;
};

}  // namespace

DedupeResult dedupe(std::span<const ClassifiedMessage> pool, const SelectionConfig& cfg, Execution exec) {
    const std::size_t n = pool.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pool[a].confidence < pool[b].confidence; });

    std::vector<LevenshteinPattern> patterns(n);
    std::vector<double> confidences(n);
#pragma omp parallel for schedule(dynamic, 64) if (exec == Execution::parallel)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
        const auto i = static_cast<std::size_t>(k);
        patterns[i] = LevenshteinPattern(text::normalize_for_similarity(pool[order[i]].message.text));
        confidences[i] = pool[order[i]].confidence;
    }

    const auto pairs = exec == Execution::parallel
                           ? kernels::near_duplicate_pairs_parallel(patterns, confidences, cfg.prob_bucket, cfg.dup_similarity)
                           : kernels::near_duplicate_pairs_serial(patterns, confidences, cfg.prob_bucket, cfg.dup_similarity);

    OldestRoot uf(pool);
    for (const auto& [i, j] : pairs) {
        uf.unite(order[i], order[j]);
    }
    DedupeResult out;
    out.root_of.resize(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        out.root_of[i] = uf.find(i);
        ++count[out.root_of[i]];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (out.root_of[i] == i) {
            out.uniques.push_back({i, count[i]});
        }
    }
    return out;
}

std::vector<RepresentativeTweet> select_representatives(std::span<const ClassifiedMessage> classified,
                                                        const SelectionConfig& cfg, Execution exec) {
    cfg.validate();
    const auto pool = candidate_pool(classified, cfg);
    if (pool.empty()) {
        return {};
    }
    auto uniques = dedupe(pool, cfg, exec).uniques;

    std::sort(uniques.begin(), uniques.end(), [&](const UniqueMessage& a, const UniqueMessage& b) {
        if (a.multiplicity != b.multiplicity) {
            return a.multiplicity > b.multiplicity;
        }
        return older_first(pool[a.pool_index].message, pool[b.pool_index].message);
    });
    if (uniques.size() > cfg.top_unique) {
        uniques.resize(cfg.top_unique);
    }

    const std::size_t k = uniques.size();
    std::vector<LevenshteinPattern> patterns;
    patterns.reserve(k);
    for (const auto& u : uniques) {
        patterns.emplace_back(text::normalize_for_similarity(pool[u.pool_index].message.text));
    }
    const auto sim = exec == Execution::parallel ? kernels::similarity_matrix_parallel(patterns)
                                                 : kernels::similarity_matrix_serial(patterns);

    std::vector<RepresentativeTweet> reps;
    reps.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        double centrality = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j != i) {
                centrality += sim[i * k + j];
            }
        }
        const auto& c = pool[uniques[i].pool_index];
        reps.push_back({c.message, c.confidence, uniques[i].multiplicity, centrality, 0});
    }
    std::sort(reps.begin(), reps.end(), [](const RepresentativeTweet& a, const RepresentativeTweet& b) {
        if (a.centrality != b.centrality) {
            return a.centrality > b.centrality;
        }
        if (a.multiplicity != b.multiplicity) {
            return a.multiplicity > b.multiplicity;
        }
        return older_first(a.message, b.message);
    });
    if (reps.size() > cfg.output_count) {
        reps.resize(cfg.output_count);
    }
    for (std::size_t i = 0; i < reps.size(); ++i) {
        reps[i].rank = i + 1;
    }
    return reps;
}

}  // namespace floodwatch
