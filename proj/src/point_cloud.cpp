#include "gfd/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "gfd/errors.hpp"

namespace gfd {

namespace {

// Uniform double in [0,1) from the top 53 bits, so streams are identical
// across standard library implementations.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

PointGrid::PointGrid(const std::vector<Vec2>& points, double cell_size) : points_(points) {
    cell_ = std::max(cell_size, 1e-9);
    nx_ = std::max(1, static_cast<int>(std::floor(1.0 / cell_)) + 1);
    ny_ = nx_;
    const int ncells = nx_ * ny_;
    std::vector<int> count(ncells, 0);
    auto cell_index = [&](Vec2 p) {
        return cell_of(p.y, ny_) * nx_ + cell_of(p.x, nx_);
    };
    for (const Vec2& p : points_) ++count[cell_index(p)];
    cell_start_.assign(ncells + 1, 0);
    for (int c = 0; c < ncells; ++c) cell_start_[c + 1] = cell_start_[c] + count[c];
    cell_items_.resize(points_.size());
    std::vector<int> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (int i = 0; i < static_cast<int>(points_.size()); ++i) {
        cell_items_[cursor[cell_index(points_[i])]++] = i;
    }
}

int PointGrid::cell_of(double v, int n) const {
    int c = static_cast<int>(std::floor(v / cell_));
    return std::clamp(c, 0, n - 1);
}

void PointGrid::query_radius(Vec2 center, double radius, std::vector<int>& out) const {
    out.clear();
    const double r2 = radius * radius;
    const int cx0 = cell_of(center.x - radius, nx_);
    const int cx1 = cell_of(center.x + radius, nx_);
    const int cy0 = cell_of(center.y - radius, ny_);
    const int cy1 = cell_of(center.y + radius, ny_);
    for (int cy = cy0; cy <= cy1; ++cy) {
        for (int cx = cx0; cx <= cx1; ++cx) {
            const int c = cy * nx_ + cx;
            for (int k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
                const int i = cell_items_[k];
                if (norm2(points_[i] - center) <= r2) out.push_back(i);
            }
        }
    }
    std::sort(out.begin(), out.end());
}

PointCloud generate_cloud(double h_target, std::uint64_t seed) {
    if (!(h_target > 0.0) || h_target > 0.5)
        throw parameter_error("generate_cloud: h_target must lie in (0, 0.5]");

    const double r = h_target / 4.0; // boundary spacing and interior separation
    PointCloud cloud;

    // Closed boundary loop: m segments per side at exact spacing 1/m <= r,
    // corners shared between adjacent sides.
    const int m = static_cast<int>(std::ceil(1.0 / r - 1e-12));
    const double s = 1.0 / m;
    auto add_boundary = [&](Vec2 p) {
        cloud.points.push_back(p);
        cloud.is_boundary.push_back(true);
    };
    for (int k = 0; k < m; ++k) add_boundary({k * s, 0.0});
    for (int k = 0; k < m; ++k) add_boundary({1.0, k * s});
    for (int k = 0; k < m; ++k) add_boundary({1.0 - k * s, 1.0});
    for (int k = 0; k < m; ++k) add_boundary({0.0, 1.0 - k * s});

    // Interior fill by dart throwing against a bucket grid of cell size r;
    // any point within r of a candidate sits in the 3x3 cell block.
    const int gn = std::max(1, static_cast<int>(std::floor(1.0 / r)) + 1);
    std::vector<std::vector<int>> buckets(static_cast<std::size_t>(gn) * gn);
    auto bucket_of = [&](Vec2 p) {
        int cx = std::clamp(static_cast<int>(std::floor(p.x / r)), 0, gn - 1);
        int cy = std::clamp(static_cast<int>(std::floor(p.y / r)), 0, gn - 1);
        return cy * gn + cx;
    };
    auto too_close = [&](Vec2 p) {
        const int cx = std::clamp(static_cast<int>(std::floor(p.x / r)), 0, gn - 1);
        const int cy = std::clamp(static_cast<int>(std::floor(p.y / r)), 0, gn - 1);
        const double r2 = r * r;
        for (int by = std::max(0, cy - 1); by <= std::min(gn - 1, cy + 1); ++by) {
            for (int bx = std::max(0, cx - 1); bx <= std::min(gn - 1, cx + 1); ++bx) {
                for (int i : buckets[by * gn + bx]) {
                    if (norm2(cloud.points[i] - p) < r2) return true;
                }
            }
        }
        return false;
    };
    for (int i = 0; i < cloud.size(); ++i) buckets[bucket_of(cloud.points[i])].push_back(i);

    std::mt19937_64 rng(seed);
    const std::uint64_t rejection_cap = static_cast<std::uint64_t>(std::ceil(200.0 / (r * r)));
    std::uint64_t consecutive_rejections = 0;
    while (consecutive_rejections < rejection_cap) {
        const Vec2 p{next_unit(rng), next_unit(rng)};
        if (too_close(p)) {
            ++consecutive_rejections;
            continue;
        }
        consecutive_rejections = 0;
        cloud.points.push_back(p);
        cloud.is_boundary.push_back(false);
        buckets[bucket_of(p)].push_back(cloud.size() - 1);
    }

    cloud.h.assign(cloud.points.size(), h_target);
    return cloud;
}

double min_point_distance(const PointCloud& cloud) {
    const int n = cloud.size();
    if (n < 2) throw parameter_error("min_point_distance: need at least two points");

    // Ring search outward from each point's cell; stop a ring once no
    // closer point can exist beyond it.
    const double cell = std::max(1.0 / std::sqrt(static_cast<double>(n)), 1e-6);
    PointGrid grid(cloud.points, cell);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> found;
    for (int i = 0; i < n; ++i) {
        double radius = cell;
        while (true) {
            grid.query_radius(cloud.points[i], radius, found);
            double local = std::numeric_limits<double>::infinity();
            for (int j : found) {
                if (j == i) continue;
                local = std::min(local, dist(cloud.points[i], cloud.points[j]));
            }
            if (local <= radius) {
                best = std::min(best, local);
                break;
            }
            if (radius > 2.0) { // farther than the domain diameter: i has no partner closer
                best = std::min(best, local);
                break;
            }
            radius *= 2.0;
        }
    }
    return best;
}

void save_cloud(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw format_error("save_cloud: cannot open '" + path + "' for writing");
    out << "id,x,y,h,is_boundary\n";
    char buf[128];
    for (int i = 0; i < cloud.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d\n", i, cloud.points[i].x,
                      cloud.points[i].y, cloud.h[i], cloud.is_boundary[i] ? 1 : 0);
        out << buf;
    }
    if (!out) throw format_error("save_cloud: write failure on '" + path + "'");
}

PointCloud load_cloud(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw format_error("load_cloud: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw format_error("load_cloud: missing header line");
    if (line.ends_with("\r")) line.pop_back();
    if (line != "id,x,y,h,is_boundary")
        throw format_error("load_cloud: line 1: bad header '" + line + "'");

    PointCloud cloud;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.ends_with("\r")) line.pop_back();
        if (line.empty()) continue;
        const std::string where = "load_cloud: line " + std::to_string(lineno) + ": ";
        std::istringstream row(line);
        std::string field;
        long id;
        double x, y, h;
        int flag;
        char* endp = nullptr;
        auto next_field = [&](const char* name) {
            if (!std::getline(row, field, ','))
                throw format_error(where + "missing field '" + std::string(name) + "'");
            return field.c_str();
        };
        id = std::strtol(next_field("id"), &endp, 10);
        if (*endp) throw format_error(where + "bad id '" + field + "'");
        x = std::strtod(next_field("x"), &endp);
        if (*endp) throw format_error(where + "bad x '" + field + "'");
        y = std::strtod(next_field("y"), &endp);
        if (*endp) throw format_error(where + "bad y '" + field + "'");
        h = std::strtod(next_field("h"), &endp);
        if (*endp) throw format_error(where + "bad h '" + field + "'");
        flag = static_cast<int>(std::strtol(next_field("is_boundary"), &endp, 10));
        if (*endp || (flag != 0 && flag != 1))
            throw format_error(where + "bad is_boundary '" + field + "'");
        if (std::getline(row, field, ',')) throw format_error(where + "trailing fields");
        if (id != cloud.size()) throw format_error(where + "ids must be consecutive from 0");
        if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
            throw format_error(where + "coordinates outside the unit square");
        if (!(h > 0.0)) throw format_error(where + "non-positive smoothing length");
        constexpr double edge_tol = 1e-12;
        const bool on_edge = x <= edge_tol || x >= 1.0 - edge_tol || y <= edge_tol ||
                             y >= 1.0 - edge_tol;
        if (flag == 1 && !on_edge)
            throw format_error(where + "boundary-flagged point not on the square edge");
        cloud.points.push_back({x, y});
        cloud.h.push_back(h);
        cloud.is_boundary.push_back(flag == 1);
    }
    return cloud;
}

} // namespace gfd
