#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfd/geometry.hpp"

namespace gfd {

// Unstructured discretization of the closed unit square. Boundary points
// lie exactly on an edge of the square; interior points are a minimum
// separation apart. Immutable after generation or loading.
struct PointCloud {
    std::vector<Vec2> points;
    std::vector<double> h;          // per-point smoothing length
    std::vector<bool> is_boundary;

    int size() const { return static_cast<int>(points.size()); }
};

// Fixed-radius neighbor index over a point set, cell size chosen by the
// caller. Queries return indices in ascending order.
class PointGrid {
  public:
    PointGrid(const std::vector<Vec2>& points, double cell_size);

    void query_radius(Vec2 center, double radius, std::vector<int>& out) const;

  private:
    const std::vector<Vec2>& points_;
    double cell_;
    int nx_ = 0, ny_ = 0;
    std::vector<int> cell_start_; // CSR layout over cells
    std::vector<int> cell_items_;

    int cell_of(double v, int n) const;
};

// Boundary points at arc spacing h_target/4 (corners included) plus a
// Poisson-disk sampled interior with minimum separation h_target/4.
// Deterministic for a fixed (h_target, seed).
PointCloud generate_cloud(double h_target, std::uint64_t seed);

// Smallest pairwise distance, via the grid index.
double min_point_distance(const PointCloud& cloud);

// CSV with header id,x,y,h,is_boundary; floats at 17 significant digits.
void save_cloud(const PointCloud& cloud, const std::string& path);
PointCloud load_cloud(const std::string& path);

} // namespace gfd
