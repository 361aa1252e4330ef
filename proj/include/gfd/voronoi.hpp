#pragma once

#include <string>
#include <vector>

#include "gfd/point_cloud.hpp"

namespace gfd {

// Voronoi diagram of the cloud clipped to the unit square. Cell volumes
// serve as discrete-norm weights; shared cell edges carry the face
// measures of the finite-volume operator.
struct VoronoiDiagram {
    struct Face {
        int i = 0, j = 0;    // i < j, stored once per unordered pair
        double measure = 0.0; // edge length
    };

    std::vector<double> volumes;
    std::vector<Face> faces;
    std::vector<std::vector<int>> adjacency; // face-sharing neighbors, ascending
    std::vector<std::vector<int>> face_of;   // aligned with adjacency: index into faces

    int size() const { return static_cast<int>(volumes.size()); }
};

VoronoiDiagram compute_voronoi(const PointCloud& cloud);

// v_i = |cell_i|; sums to the domain area 1.
std::vector<double> norm_weights(const VoronoiDiagram& diagram);

// One polygon, clipped against the bisector half-planes of the candidate
// neighbors in ascending distance order. Exposed for the per-cell tests.
struct CellResult {
    double volume = 0.0;
    std::vector<int> neighbors;      // clipping neighbor per surviving edge
    std::vector<double> face_length; // aligned with neighbors
};
CellResult clip_cell(const PointCloud& cloud, const PointGrid& grid, int i);

// Debug dumps: CSV "i,volume" and "i,j,face_measure".
void dump_voronoi(const VoronoiDiagram& diagram, const std::string& volumes_path,
                  const std::string& faces_path);

} // namespace gfd
