#include "floodwatch/kernels.hpp"
#include "floodwatch/levenshtein.hpp"

#include <algorithm>

namespace floodwatch::kernels {

namespace {

// Scans partners j > i inside the confidence bucket. Confidences are sorted
// ascending, so c[j] - c[i] only grows with j.
template <class Emit>
void scan_row(std::span<const LevenshteinPattern> texts, std::span<const double> conf, std::size_t i, double bucket,
              double threshold, Emit&& emit) {
    const std::size_t la = texts[i].size();
    for (std::size_t j = i + 1; j < texts.size(); ++j) {
        if (conf[j] - conf[i] > bucket) {
            break;
        }
        const std::size_t lb = texts[j].size();
        // Distance is at least the length gap; skip when even that bound fails.
        const std::size_t gap = la > lb ? la - lb : lb - la;
        if (similarity_from_distance(gap, la, lb) <= threshold) {
            continue;
        }
        const std::size_t d = edit_distance(texts[i], texts[j]);
        if (similarity_from_distance(d, la, lb) > threshold) {
            emit(i, j);
        }
    }
}

}  // namespace

IndexPairs near_duplicate_pairs_serial(std::span<const LevenshteinPattern> texts,
                                       std::span<const double> sorted_confidences, double bucket, double threshold) {
    IndexPairs out;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        scan_row(texts, sorted_confidences, i, bucket, threshold,
                 [&](std::size_t a, std::size_t b) { out.emplace_back(a, b); });
    }
    return out;
}

IndexPairs near_duplicate_pairs_parallel(std::span<const LevenshteinPattern> texts,
                                         std::span<const double> sorted_confidences, double bucket, double threshold) {
    IndexPairs out;
    const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel
    {
        IndexPairs local;
#pragma omp for schedule(dynamic, 8) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            scan_row(texts, sorted_confidences, static_cast<std::size_t>(i), bucket, threshold,
                     [&](std::size_t a, std::size_t b) { local.emplace_back(a, b); });
        }
#pragma omp critical
        out.insert(out.end(), local.begin(), local.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> similarity_matrix_serial(std::span<const LevenshteinPattern> texts) {
    const std::size_t n = texts.size();
    std::vector<double> m(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = normalized_similarity(texts[i], texts[j]);
            m[i * n + j] = s;
            m[j * n + i] = s;
        }
    }
    return m;
}

std::vector<double> similarity_matrix_parallel(std::span<const LevenshteinPattern> texts) {
    const std::size_t n = texts.size();
    std::vector<double> m(n * n, 1.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
        const auto i = static_cast<std::size_t>(k);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = normalized_similarity(texts[i], texts[j]);
            m[i * n + j] = s;
            m[j * n + i] = s;
        }
    }
    return m;
}

}  // namespace floodwatch::kernels
