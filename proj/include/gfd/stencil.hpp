#pragma once

#include <vector>

#include "gfd/point_cloud.hpp"

namespace gfd {

// Per-point neighbor lists S_i (each contains i itself), index-ascending.
// effective_h[i] is the query radius that produced the stencil; it equals
// cloud.h[i] unless the radius had to grow to reach min_neighbors.
struct StencilSet {
    std::vector<std::vector<int>> indices;
    std::vector<std::vector<double>> distances; // aligned with indices
    std::vector<double> effective_h;
    int grown_points = 0;

    int size() const { return static_cast<int>(indices.size()); }
};

StencilSet build_stencils(const PointCloud& cloud, int min_neighbors);

} // namespace gfd
