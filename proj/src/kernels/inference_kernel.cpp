#include "floodwatch/cnn.hpp"
#include "floodwatch/kernels.hpp"

namespace floodwatch::kernels {

std::vector<ProbPair> infer_batch_serial(const CnnModel& model, std::span<const EncodedText> inputs) {
    std::vector<ProbPair> out(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        out[i] = model.classify(inputs[i]);
    }
    return out;
}

std::vector<ProbPair> infer_batch_parallel(const CnnModel& model, std::span<const EncodedText> inputs) {
    std::vector<ProbPair> out(inputs.size());
    const auto n = static_cast<std::ptrdiff_t>(inputs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = model.classify(inputs[k]);
    }
    return out;
}

}  // namespace floodwatch::kernels
