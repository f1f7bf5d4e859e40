#include "floodwatch/kernels.hpp"
#include "floodwatch/router.hpp"

namespace floodwatch::kernels {

Assignments match_batch_serial(const QueryMatcher& matcher, std::span<const Message> messages) {
    Assignments out(messages.size());
    for (std::size_t i = 0; i < messages.size(); ++i) {
        out[i] = matcher.match(messages[i]);
    }
    return out;
}

Assignments match_batch_parallel(const QueryMatcher& matcher, std::span<const Message> messages) {
    Assignments out(messages.size());
    const auto n = static_cast<std::ptrdiff_t>(messages.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = matcher.match(messages[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace floodwatch::kernels
