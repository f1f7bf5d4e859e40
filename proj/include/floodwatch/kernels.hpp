#pragma once

// Data-parallel kernels. Each `_parallel` function is an OpenMP version of
// the `_serial` function next to it and must return identical results.

#include "floodwatch/common.hpp"
#include "floodwatch/message.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace floodwatch {

class QueryMatcher;
class AreaSet;
class CnnModel;
class LevenshteinPattern;
struct ProbPair;
struct EncodedText;

namespace kernels {

using Assignments = std::vector<std::vector<std::string>>;

Assignments match_batch_serial(const QueryMatcher& matcher, std::span<const Message> messages);
Assignments match_batch_parallel(const QueryMatcher& matcher, std::span<const Message> messages);

/// Area index per point (-1 when outside every area).
std::vector<int> locate_batch_serial(const AreaSet& areas, std::span<const LatLon> points);
std::vector<int> locate_batch_parallel(const AreaSet& areas, std::span<const LatLon> points);

/// Pairs (i, j), i < j, of items sorted by ascending confidence whose
/// confidences differ by at most `bucket` and whose normalized similarity
/// exceeds `threshold`. Output sorted.
using IndexPairs = std::vector<std::pair<std::size_t, std::size_t>>;
IndexPairs near_duplicate_pairs_serial(std::span<const LevenshteinPattern> texts,
                                       std::span<const double> sorted_confidences, double bucket,
                                       double threshold);
IndexPairs near_duplicate_pairs_parallel(std::span<const LevenshteinPattern> texts,
                                         std::span<const double> sorted_confidences, double bucket,
                                         double threshold);

/// Row-major n x n normalized-similarity matrix (diagonal = 1).
std::vector<double> similarity_matrix_serial(std::span<const LevenshteinPattern> texts);
std::vector<double> similarity_matrix_parallel(std::span<const LevenshteinPattern> texts);

std::vector<ProbPair> infer_batch_serial(const CnnModel& model, std::span<const EncodedText> inputs);
std::vector<ProbPair> infer_batch_parallel(const CnnModel& model, std::span<const EncodedText> inputs);

}  // namespace kernels
}  // namespace floodwatch
