#include "gfd/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "gfd/errors.hpp"

namespace gfd {

namespace {

constexpr double kPruneTol = 1e-12;

// Convex polygon with a tag per edge v[k] -> v[k+1]: the clipping
// neighbor's index, or -1 for a piece of the square wall.
struct TaggedPolygon {
    std::vector<Vec2> v;
    std::vector<int> tag;
};

TaggedPolygon unit_square() {
    TaggedPolygon p;
    p.v = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    p.tag = {-1, -1, -1, -1};
    return p;
}

// Keep the side of the bisector closer to a; new edges are tagged with j.
void clip_halfplane(TaggedPolygon& poly, Vec2 a, Vec2 b, int j) {
    const Vec2 n = b - a;
    const Vec2 mid = 0.5 * (a + b);
    const std::size_t count = poly.v.size();
    if (count == 0) return;

    thread_local std::vector<double> g;
    g.resize(count);
    for (std::size_t k = 0; k < count; ++k) g[k] = dot(poly.v[k] - mid, n);

    TaggedPolygon out;
    out.v.reserve(count + 2);
    out.tag.reserve(count + 2);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t k1 = (k + 1) % count;
        const bool in_a = g[k] <= 0.0;
        const bool in_b = g[k1] <= 0.0;
        if (in_a) {
            out.v.push_back(poly.v[k]);
            out.tag.push_back(poly.tag[k]);
            if (!in_b) {
                const double t = g[k] / (g[k] - g[k1]);
                out.v.push_back(poly.v[k] + t * (poly.v[k1] - poly.v[k]));
                out.tag.push_back(j); // runs along the bisector to the re-entry point
            }
        } else if (in_b) {
            const double t = g[k] / (g[k] - g[k1]);
            out.v.push_back(poly.v[k] + t * (poly.v[k1] - poly.v[k]));
            out.tag.push_back(poly.tag[k]);
        }
    }
    poly = std::move(out);
}

void prune_short_edges(TaggedPolygon& poly) {
    TaggedPolygon out;
    const std::size_t count = poly.v.size();
    for (std::size_t k = 0; k < count; ++k) {
        if (!out.v.empty() && dist(out.v.back(), poly.v[k]) < kPruneTol) continue;
        out.v.push_back(poly.v[k]);
        out.tag.push_back(poly.tag[k]);
    }
    while (out.v.size() > 1 && dist(out.v.front(), out.v.back()) < kPruneTol) {
        out.v.pop_back();
        out.tag.pop_back();
    }
    poly = std::move(out);
}

double shoelace_area(const TaggedPolygon& poly) {
    double a = 0.0;
    const std::size_t count = poly.v.size();
    for (std::size_t k = 0; k < count; ++k) {
        const Vec2& p = poly.v[k];
        const Vec2& q = poly.v[(k + 1) % count];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * std::abs(a);
}

double circumradius(const TaggedPolygon& poly, Vec2 center) {
    double r2 = 0.0;
    for (const Vec2& p : poly.v) r2 = std::max(r2, norm2(p - center));
    return std::sqrt(r2);
}

} // namespace

CellResult clip_cell(const PointCloud& cloud, const PointGrid& grid, int i) {
    const Vec2 xi = cloud.points[i];
    std::vector<int> candidates;
    TaggedPolygon poly;

    double radius = 2.0 * cloud.h[i];
    constexpr double radius_cap = 2.9; // > 2*sqrt(2): the query saw every point
    while (true) {
        grid.query_radius(xi, radius, candidates);
        std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            return norm2(cloud.points[a] - xi) < norm2(cloud.points[b] - xi);
        });
        poly = unit_square();
        for (int j : candidates) {
            if (j == i) continue;
            if (dist(cloud.points[j], xi) < 1e-14)
                throw degenerate_input_error("compute_voronoi: duplicate points " +
                                             std::to_string(std::min(i, j)) + " and " +
                                             std::to_string(std::max(i, j)));
            clip_halfplane(poly, xi, cloud.points[j], j);
        }
        prune_short_edges(poly);
        // Bisectors of points beyond twice the circumradius cannot cut the cell.
        if (radius >= radius_cap || 2.0 * circumradius(poly, xi) <= radius) break;
        radius *= 2.0;
    }

    if (poly.v.size() < 3)
        throw degenerate_input_error("compute_voronoi: degenerate cell at point " +
                                     std::to_string(i));

    CellResult cell;
    cell.volume = shoelace_area(poly);
    const std::size_t count = poly.v.size();
    for (std::size_t k = 0; k < count; ++k) {
        if (poly.tag[k] < 0) continue;
        const double len = dist(poly.v[k], poly.v[(k + 1) % count]);
        if (len < kPruneTol) continue;
        cell.neighbors.push_back(poly.tag[k]);
        cell.face_length.push_back(len);
    }
    return cell;
}

VoronoiDiagram compute_voronoi(const PointCloud& cloud) {
    const int n = cloud.size();
    if (n < 1) throw parameter_error("compute_voronoi: empty cloud");

    const double h_max = *std::max_element(cloud.h.begin(), cloud.h.end());
    const PointGrid grid(cloud.points, h_max);

    VoronoiDiagram diagram;
    diagram.volumes.resize(n);
    diagram.adjacency.resize(n);
    diagram.face_of.resize(n);

    // Each unordered pair keeps the measure computed from the lower-index cell.
    std::map<std::pair<int, int>, double> measures;
    for (int i = 0; i < n; ++i) {
        CellResult cell = clip_cell(cloud, grid, i);
        diagram.volumes[i] = cell.volume;
        for (std::size_t k = 0; k < cell.neighbors.size(); ++k) {
            const int j = cell.neighbors[k];
            const auto key = std::minmax(i, j);
            auto it = measures.find(key);
            if (it == measures.end() || i < j) measures[key] = cell.face_length[k];
        }
    }

    // Ordered map iteration yields ascending pairs, so the per-point
    // adjacency lists come out ascending as well.
    for (const auto& [key, measure] : measures) {
        const int f = static_cast<int>(diagram.faces.size());
        diagram.faces.push_back({key.first, key.second, measure});
        diagram.adjacency[key.first].push_back(key.second);
        diagram.face_of[key.first].push_back(f);
        diagram.adjacency[key.second].push_back(key.first);
        diagram.face_of[key.second].push_back(f);
    }
    return diagram;
}

std::vector<double> norm_weights(const VoronoiDiagram& diagram) { return diagram.volumes; }

void dump_voronoi(const VoronoiDiagram& diagram, const std::string& volumes_path,
                  const std::string& faces_path) {
    std::ofstream vol(volumes_path);
    if (!vol) throw format_error("dump_voronoi: cannot open '" + volumes_path + "'");
    vol << "i,volume\n";
    char buf[96];
    for (int i = 0; i < diagram.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g\n", i, diagram.volumes[i]);
        vol << buf;
    }
    std::ofstream fac(faces_path);
    if (!fac) throw format_error("dump_voronoi: cannot open '" + faces_path + "'");
    fac << "i,j,face_measure\n";
    for (const auto& f : diagram.faces) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", f.i, f.j, f.measure);
        fac << buf;
    }
}

} // namespace gfd
