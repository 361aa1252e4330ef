#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "gfd/benchmark.hpp"
#include "gfd/errors.hpp"
#include "gfd/solver.hpp"
#include "gfd/verification.hpp"

namespace {

using namespace gfd;

std::vector<double> parse_h_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos != tok.size() || !(v > 0.0)) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw parameter_error("bad h value '" + tok + "' in list");
        }
    }
    if (out.empty()) throw parameter_error("empty h list");
    return out;
}

int cmd_gen(double h, std::uint64_t seed, const std::string& out_path) {
    PointCloud cloud = generate_cloud(h, seed);
    save_cloud(cloud, out_path);
    std::printf("wrote %d points to %s\n", cloud.size(), out_path.c_str());
    return 0;
}

void write_solution_csv(const std::string& path, const PointCloud& cloud,
                        const std::vector<double>& u_h, const std::vector<double>& u_ref) {
    std::ofstream out(path);
    if (!out) throw format_error("solve: cannot open '" + path + "'");
    out << "id,x,y,u_h,u_ref,abs_err\n";
    char buf[256];
    for (int i = 0; i < cloud.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                      cloud.points[i].x, cloud.points[i].y, u_h[i], u_ref[i],
                      std::abs(u_ref[i] - u_h[i]));
        out << buf;
    }
}

int cmd_solve(int case_id, const std::string& method_tag_s, const std::string& recon_tag_s,
              double h, std::uint64_t seed, const std::string& dd, const std::string& out_path,
              const std::string& dump_op_path) {
    const TestCase tc = define_test_case(case_id);
    const Method method = method_from_tag(method_tag_s);
    const Recon scheme = recon_from_tag(recon_tag_s);

    SweepOptions opts;
    if (dd == "on")
        opts.dd_correction = true;
    else if (dd == "off")
        opts.dd_correction = false;
    else if (dd != "auto")
        throw parameter_error("--dd must be on, off or auto");

    PointCloud cloud = generate_cloud(h, seed);
    StencilSet stencils = build_stencils(cloud, opts.min_neighbors);
    VoronoiDiagram diagram = compute_voronoi(cloud);
    BuiltOperator built =
        build_method_operator(method, scheme, cloud, stencils, diagram, tc, opts);
    if (!dump_op_path.empty()) dump_operator(built.op, dump_op_path);

    std::vector<double> u_h, u_ref(cloud.size());
    if (tc.parabolic) {
        const double dt = cfl_dt(min_point_distance(cloud), 1.0);
        u_h = solve_heat(built.op, cloud, cloud.is_boundary, tc, dt, 1.0);
        for (int i = 0; i < cloud.size(); ++i) u_ref[i] = tc.reference(cloud.points[i], 1.0);
    } else {
        std::vector<double> q(cloud.size());
        for (int i = 0; i < cloud.size(); ++i) q[i] = tc.q_elliptic(cloud.points[i]);
        u_h = solve_poisson(built.op, q, cloud.is_boundary);
        for (int i = 0; i < cloud.size(); ++i) u_ref[i] = tc.u_bar(cloud.points[i]);
    }
    const double err = discrete_l2_error(u_h, u_ref, norm_weights(diagram));
    if (!out_path.empty()) write_solution_csv(out_path, cloud, u_h, u_ref);
    std::printf("error=%.17g\n", err);
    return 0;
}

int cmd_converge(int case_id, const std::string& methods_csv, const std::string& recon_tag_s,
                 const std::string& h_csv, std::uint64_t seed, const std::string& out_path) {
    const TestCase tc = define_test_case(case_id);
    const Recon scheme = recon_from_tag(recon_tag_s);
    std::vector<Method> methods;
    {
        std::istringstream in(methods_csv);
        std::string tok;
        while (std::getline(in, tok, ',')) methods.push_back(method_from_tag(tok));
        if (methods.empty()) throw parameter_error("empty method list");
    }
    const std::vector<double> h_list = parse_h_list(h_csv);

    const std::vector<SweepRow> rows = run_convergence(tc, methods, scheme, h_list, seed);
    if (!out_path.empty()) write_results_csv(rows, out_path);

    for (Method m : methods) {
        std::vector<SweepRow> mine;
        for (const SweepRow& r : rows)
            if (r.method == m) mine.push_back(r);
        const OrderFit fit = estimate_order(mine);
        if (fit.valid)
            std::printf("order[%s]=%.3f (fit residual %.3g, %d levels)\n",
                        method_tag(m).c_str(), fit.slope, fit.fit_residual, fit.points_used);
        else
            std::printf("order[%s]=n/a (only %d usable levels)\n", method_tag(m).c_str(),
                        fit.points_used);
    }
    bool any_failure = false;
    for (const SweepRow& r : rows)
        if (!r.failure.empty()) {
            std::fprintf(stderr, "level h=%g method=%s failed: %s\n", r.h,
                         method_tag(r.method).c_str(), r.failure.c_str());
            any_failure = true;
        }
    return any_failure ? 3 : 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_path) {
    const std::vector<double> h_list{0.16, 0.08, 0.04, 0.02};
    CheckReport report;
    if (suite == "consistency" || suite == "all") {
        report.merge(check_consistency_suite({false, 2, Recon::am}, h_list, seed));
        report.merge(check_consistency_suite({false, 4, Recon::am}, h_list, seed));
        report.merge(check_consistency_suite({true, 2, Recon::am}, h_list, seed));
        report.merge(check_consistency_suite({true, 4, Recon::am}, h_list, seed));
    }
    if (suite == "signs" || suite == "all") {
        PointCloud cloud = generate_cloud(0.08, seed);
        StencilSet stencils = build_stencils(cloud, 30);
        VoronoiDiagram diagram = compute_voronoi(cloud);
        const OperatorMatrix fvm = build_fvm_laplace(diagram, cloud);
        const SignConditionReport fvm_rep = check_sign_conditions(fvm);
        CheckEntry e;
        e.check = "signs/fvm-laplace";
        e.param = "violations=" + std::to_string(fvm_rep.violation_indices.size());
        e.residual = static_cast<double>(fvm_rep.violation_indices.size());
        e.pass = fvm_rep.violation_indices.empty();
        e.asserted = true;
        report.entries.push_back(e);
        for (bool dd : {false, true}) {
            const OperatorMatrix lap = build_laplace(cloud, stencils, 2, dd);
            const SignConditionReport rep = check_sign_conditions(lap);
            CheckEntry le;
            le.check = std::string("signs/laplace2") + (dd ? "+dd" : "");
            le.param = "dd_rows=" + std::to_string(rep.rows_dd) + "/" +
                       std::to_string(rep.rows_total);
            le.residual = static_cast<double>(rep.violation_indices.size());
            report.entries.push_back(le);
        }
    }
    if (suite == "derived" || suite == "all")
        report.merge(check_derived_operator_orders(h_list, seed));
    if (suite == "enrichment" || suite == "all") {
        report.merge(check_enrichment_suite(h_list, seed, Recon::am));
        report.merge(check_enrichment_suite(h_list, seed, Recon::hm));
    }
    if (report.entries.empty())
        throw parameter_error("unknown suite '" + suite +
                              "' (expected consistency|signs|derived|enrichment|all)");

    std::cout << format_check_report(report);
    if (!out_path.empty()) write_check_report(report, out_path);
    std::cout << (report.all_passed() ? "verify: all assertions passed\n"
                                      : "verify: FAILURES present\n");
    return report.all_passed() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Meshfree generalized finite difference operators on the unit square"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print help"); // frees -h; spec'd flags use --h

    auto* gen = app.add_subcommand("gen", "Generate a point cloud and write it as CSV");
    gen->set_help_flag("--help", "Print help");
    double gen_h = 0.08;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--h", gen_h, "Target smoothing length")->required();
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", gen_out, "Output CSV path")->required();

    auto* solve = app.add_subcommand("solve", "Solve one test case on one cloud");
    solve->set_help_flag("--help", "Print help");
    int solve_case = 1;
    std::string solve_method = "ddo2", solve_recon = "am", solve_dd = "auto";
    double solve_h = 0.08;
    std::uint64_t solve_seed = 1;
    std::string solve_out, solve_dump_op;
    solve->add_option("--case", solve_case, "Test case id (1..5)")->required();
    solve->add_option("--method", solve_method, "fvm|mls2|mls4|ddo2|ddo4");
    solve->add_option("--recon", solve_recon, "am|hm|gm|taylor|skew|gr");
    solve->add_option("--h", solve_h, "Target smoothing length")->required();
    solve->add_option("--seed", solve_seed, "RNG seed");
    solve->add_option("--dd", solve_dd, "Diagonal-dominance correction: on|off|auto");
    solve->add_option("--out", solve_out, "Solution CSV path");
    solve->add_option("--dump-operator", solve_dump_op, "Operator triple dump path");

    auto* converge = app.add_subcommand("converge", "Run a convergence sweep");
    converge->set_help_flag("--help", "Print help");
    int conv_case = 1;
    std::string conv_methods = "ddo2", conv_recon = "am";
    std::string conv_h_list = "0.16,0.08,0.04,0.02";
    std::uint64_t conv_seed = 1;
    std::string conv_out;
    converge->add_option("--case", conv_case, "Test case id (1..5)")->required();
    converge->add_option("--methods", conv_methods, "Comma-separated method list");
    converge->add_option("--recon", conv_recon, "Reconstruction tag");
    converge->add_option("--h-list", conv_h_list, "Comma-separated smoothing lengths");
    converge->add_option("--seed", conv_seed, "RNG seed");
    converge->add_option("--out", conv_out, "Results CSV path");

    auto* verify = app.add_subcommand("verify", "Run the verification suites");
    verify->set_help_flag("--help", "Print help");
    std::string verify_suite = "all";
    std::uint64_t verify_seed = 1;
    std::string verify_out;
    verify->add_option("--suite", verify_suite, "consistency|signs|derived|enrichment|all");
    verify->add_option("--seed", verify_seed, "RNG seed");
    verify->add_option("--out", verify_out, "Report CSV path");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_gen(gen_h, gen_seed, gen_out);
        if (solve->parsed())
            return cmd_solve(solve_case, solve_method, solve_recon, solve_h, solve_seed,
                             solve_dd, solve_out, solve_dump_op);
        if (converge->parsed())
            return cmd_converge(conv_case, conv_methods, conv_recon, conv_h_list, conv_seed,
                                conv_out);
        if (verify->parsed()) return cmd_verify(verify_suite, verify_seed, verify_out);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const parameter_error& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return 2;
    } catch (const format_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
