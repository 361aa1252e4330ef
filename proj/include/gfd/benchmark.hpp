#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfd/diffusion.hpp"
#include "gfd/test_cases.hpp"

namespace gfd {

enum class Method { fvm, mls2, mls4, ddo2, ddo4 };

Method method_from_tag(const std::string& tag);
std::string method_tag(Method m);

struct SweepRow {
    int case_id = 0;
    Method method = Method::fvm;
    Recon scheme = Recon::am;
    std::uint64_t seed = 0;
    double h = 0.0;
    int n_points = 0;
    double dt = 0.0; // 0 for elliptic rows
    double error = 0.0;
    double wall_time_s = 0.0;
    long clamp_count = 0;
    int dd_violations = 0;
    std::string failure; // non-empty when this level failed
};

struct SweepOptions {
    int min_neighbors = 30;
    // Diagonal-dominance correction for the underlying Laplacian of the
    // derived methods: on for ddo2, off for ddo4 unless overridden.
    std::optional<bool> dd_correction;
};

// One convergence sweep: per refinement level a fresh cloud, stencils and
// Voronoi diagram (shared across the methods), the operator per method,
// the elliptic solve or the CFL-stepped march, and the weighted error.
// Failures are recorded per row and the sweep continues.
std::vector<SweepRow> run_convergence(const TestCase& tc, const std::vector<Method>& methods,
                                      Recon scheme, const std::vector<double>& h_list,
                                      std::uint64_t seed, const SweepOptions& opts = {});

struct OrderFit {
    double slope = 0.0;
    double fit_residual = 0.0; // rms residual of the least-squares line
    int points_used = 0;
    bool valid = false;
};

// Least-squares slope of log(error) against log(N^{-1/2}) over the rows
// of one method (failed rows are skipped).
OrderFit estimate_order(const std::vector<SweepRow>& rows);

// Slope between two consecutive levels, same abscissa convention.
double pairwise_order(const SweepRow& coarse, const SweepRow& fine);

// Results CSV:
// case,method,scheme,seed,h,N,dt,error,order_running,wall_time_s,clamp_count,dd_violations
void write_results_csv(const std::vector<SweepRow>& rows, const std::string& path);

// Builds the requested diffusion operator; exposed for the solve command.
struct BuiltOperator {
    OperatorMatrix op;
    long clamp_count = 0;
    int dd_violations = 0; // interior rows failing the sign condition
};
BuiltOperator build_method_operator(Method method, Recon scheme, const PointCloud& cloud,
                                    const StencilSet& stencils, const VoronoiDiagram& diagram,
                                    const TestCase& tc, const SweepOptions& opts);

} // namespace gfd
