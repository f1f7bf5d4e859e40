#include "floodwatch/geometry.hpp"
#include "floodwatch/kernels.hpp"

namespace floodwatch::kernels {

std::vector<int> locate_batch_serial(const AreaSet& areas, std::span<const LatLon> points) {
    std::vector<int> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        out[i] = areas.locate_index(points[i]);
    }
    return out;
}

std::vector<int> locate_batch_parallel(const AreaSet& areas, std::span<const LatLon> points) {
    std::vector<int> out(points.size());
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = areas.locate_index(points[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace floodwatch::kernels
