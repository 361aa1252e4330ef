#include "gfd/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "gfd/errors.hpp"
#include "gfd/solver.hpp"

namespace gfd {

Method method_from_tag(const std::string& tag) {
    if (tag == "fvm") return Method::fvm;
    if (tag == "mls2") return Method::mls2;
    if (tag == "mls4") return Method::mls4;
    if (tag == "ddo2") return Method::ddo2;
    if (tag == "ddo4") return Method::ddo4;
    throw parameter_error("unknown method '" + tag + "'");
}

std::string method_tag(Method m) {
    switch (m) {
        case Method::fvm: return "fvm";
        case Method::mls2: return "mls2";
        case Method::mls4: return "mls4";
        case Method::ddo2: return "ddo2";
        case Method::ddo4: return "ddo4";
    }
    return "?";
}

namespace {

int count_interior_sign_violations(const OperatorMatrix& op,
                                   const std::vector<bool>& boundary) {
    int violations = 0;
    for (int i = 0; i < op.size(); ++i) {
        if (boundary[i]) continue;
        if (!satisfies_sign_condition(op.row(i))) ++violations;
    }
    return violations;
}

DiffusivityField field_for(const TestCase& tc, const PointCloud& cloud,
                           const StencilSet& stencils, bool needs_gradient,
                           GradientSource source) {
    DiffusivityField field =
        sample_field(tc.lambda, cloud, tc.grad_lambda, tc.lambda_laplacian);
    if (needs_gradient && source == GradientSource::discrete) {
        auto [gx, gy] = build_gradient(cloud, stencils);
        attach_discrete_gradients(field, gx, gy);
    }
    return field;
}

} // namespace

BuiltOperator build_method_operator(Method method, Recon scheme, const PointCloud& cloud,
                                    const StencilSet& stencils, const VoronoiDiagram& diagram,
                                    const TestCase& tc, const SweepOptions& opts) {
    const GradientSource source = GradientSource::discrete;
    BuiltOperator built;
    switch (method) {
        case Method::fvm: {
            DiffusivityField field =
                field_for(tc, cloud, stencils, recon_needs_gradient(scheme), source);
            built.op = build_fvm_diffusion(diagram, cloud, field, scheme, source);
            break;
        }
        case Method::mls2:
        case Method::mls4: {
            DiffusivityField field = field_for(tc, cloud, stencils, true, source);
            built.op = build_mls_diffusion(cloud, stencils, field,
                                           method == Method::mls2 ? 2 : 4, source);
            break;
        }
        case Method::ddo2:
        case Method::ddo4: {
            const int order = (method == Method::ddo2) ? 2 : 4;
            const bool dd = opts.dd_correction.value_or(order == 2);
            DiffusivityField field =
                field_for(tc, cloud, stencils, recon_needs_gradient(scheme), source);
            OperatorMatrix laplace = build_laplace(cloud, stencils, order, dd);
            built.op = build_ddo(cloud, laplace, field, scheme, source);
            break;
        }
    }
    built.clamp_count = built.op.clamp_count;
    built.dd_violations = count_interior_sign_violations(built.op, cloud.is_boundary);
    return built;
}

std::vector<SweepRow> run_convergence(const TestCase& tc, const std::vector<Method>& methods,
                                      Recon scheme, const std::vector<double>& h_list,
                                      std::uint64_t seed, const SweepOptions& opts) {
    if (h_list.empty()) throw parameter_error("run_convergence: empty h list");
    using clock = std::chrono::steady_clock;

    std::vector<SweepRow> rows;
    for (double h : h_list) {
        PointCloud cloud;
        StencilSet stencils;
        VoronoiDiagram diagram;
        std::string level_failure;
        try {
            cloud = generate_cloud(h, seed);
            stencils = build_stencils(cloud, opts.min_neighbors);
            diagram = compute_voronoi(cloud);
        } catch (const std::exception& e) {
            level_failure = e.what();
        }

        for (Method method : methods) {
            SweepRow row;
            row.case_id = tc.id;
            row.method = method;
            row.scheme = scheme;
            row.seed = seed;
            row.h = h;
            if (!level_failure.empty()) {
                row.failure = level_failure;
                rows.push_back(row);
                continue;
            }
            row.n_points = cloud.size();
            const auto start = clock::now();
            try {
                BuiltOperator built =
                    build_method_operator(method, scheme, cloud, stencils, diagram, tc, opts);
                row.clamp_count = built.clamp_count;
                row.dd_violations = built.dd_violations;

                std::vector<double> u_ref(cloud.size());
                std::vector<double> u_h;
                if (tc.parabolic) {
                    const double dx = min_point_distance(cloud);
                    row.dt = cfl_dt(dx, 1.0);
                    u_h = solve_heat(built.op, cloud, cloud.is_boundary, tc, row.dt, 1.0);
                    for (int i = 0; i < cloud.size(); ++i)
                        u_ref[i] = tc.reference(cloud.points[i], 1.0);
                } else {
                    std::vector<double> q(cloud.size());
                    for (int i = 0; i < cloud.size(); ++i)
                        q[i] = tc.q_elliptic(cloud.points[i]);
                    u_h = solve_poisson(built.op, q, cloud.is_boundary);
                    for (int i = 0; i < cloud.size(); ++i)
                        u_ref[i] = tc.u_bar(cloud.points[i]);
                }
                row.error = discrete_l2_error(u_h, u_ref, norm_weights(diagram));
            } catch (const std::exception& e) {
                row.failure = e.what();
            }
            row.wall_time_s = std::chrono::duration<double>(clock::now() - start).count();
            rows.push_back(row);
        }
    }
    return rows;
}

double pairwise_order(const SweepRow& coarse, const SweepRow& fine) {
    const double dx = 0.5 * (std::log(coarse.n_points) - std::log(fine.n_points));
    const double dy = std::log(fine.error) - std::log(coarse.error);
    return dy / dx;
}

OrderFit estimate_order(const std::vector<SweepRow>& rows) {
    std::vector<double> xs, ys;
    for (const SweepRow& r : rows) {
        if (!r.failure.empty() || !(r.error > 0.0) || r.n_points < 1) continue;
        xs.push_back(-0.5 * std::log(static_cast<double>(r.n_points))); // log(N^{-1/2})
        ys.push_back(std::log(r.error));
    }
    OrderFit fit;
    fit.points_used = static_cast<int>(xs.size());
    if (xs.size() < 2) return fit;

    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (sxx == 0.0) return fit;
    fit.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double pred = my + fit.slope * (xs[k] - mx);
        ss += (ys[k] - pred) * (ys[k] - pred);
    }
    fit.fit_residual = std::sqrt(ss / xs.size());
    fit.valid = true;
    return fit;
}

void write_results_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw format_error("write_results_csv: cannot open '" + path + "'");
    out << "case,method,scheme,seed,h,N,dt,error,order_running,wall_time_s,clamp_count,"
           "dd_violations\n";
    char buf[512];
    std::map<std::string, const SweepRow*> last_ok; // previous level per method
    for (const SweepRow& r : rows) {
        const std::string key = method_tag(r.method) + "/" + recon_tag(r.scheme);
        std::string order_running;
        if (r.failure.empty() && r.error > 0.0) {
            if (const SweepRow* prev = last_ok.count(key) ? last_ok[key] : nullptr) {
                std::snprintf(buf, sizeof(buf), "%.6g", pairwise_order(*prev, r));
                order_running = buf;
            }
            last_ok[key] = &r;
        }
        if (r.failure.empty()) {
            std::snprintf(buf, sizeof(buf), "%d,%s,%s,%llu,%.17g,%d,%.17g,%.17g,%s,%.6g,%ld,%d\n",
                          r.case_id, method_tag(r.method).c_str(), recon_tag(r.scheme).c_str(),
                          static_cast<unsigned long long>(r.seed), r.h, r.n_points, r.dt,
                          r.error, order_running.c_str(), r.wall_time_s, r.clamp_count,
                          r.dd_violations);
        } else {
            std::string msg = r.failure;
            for (char& c : msg)
                if (c == ',' || c == '\n') c = ';';
            std::snprintf(buf, sizeof(buf), "%d,%s,%s,%llu,%.17g,%d,,error:%s,,%.6g,,\n",
                          r.case_id, method_tag(r.method).c_str(), recon_tag(r.scheme).c_str(),
                          static_cast<unsigned long long>(r.seed), r.h, r.n_points,
                          msg.c_str(), r.wall_time_s);
        }
        out << buf;
    }
}

} // namespace gfd
