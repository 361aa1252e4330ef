#include "gfd/stencil.hpp"

#include <algorithm>
#include <cmath>

#include "gfd/errors.hpp"

namespace gfd {

StencilSet build_stencils(const PointCloud& cloud, int min_neighbors) {
    const int n = cloud.size();
    if (n == 0) throw parameter_error("build_stencils: empty cloud");
    if (min_neighbors < 1) throw parameter_error("build_stencils: min_neighbors must be >= 1");

    const double h_max = *std::max_element(cloud.h.begin(), cloud.h.end());
    const PointGrid grid(cloud.points, h_max);
    constexpr double domain_diameter = 1.4142135623730951; // sqrt(2) for the unit square

    StencilSet st;
    st.indices.resize(n);
    st.distances.resize(n);
    st.effective_h.resize(n);

    std::vector<int> found;
    for (int i = 0; i < n; ++i) {
        double radius = cloud.h[i];
        bool grew = false;
        while (true) {
            grid.query_radius(cloud.points[i], radius, found);
            if (static_cast<int>(found.size()) >= min_neighbors) break;
            if (radius > domain_diameter)
                throw degenerate_cloud_error(
                    "build_stencils: point " + std::to_string(i) +
                    " cannot reach min_neighbors even over the whole domain");
            radius *= 1.3;
            grew = true;
        }
        st.indices[i] = found; // ascending from the grid query
        st.distances[i].resize(found.size());
        for (std::size_t k = 0; k < found.size(); ++k)
            st.distances[i][k] = dist(cloud.points[found[k]], cloud.points[i]);
        st.effective_h[i] = radius;
        if (grew) ++st.grown_points;
    }
    return st;
}

} // namespace gfd
