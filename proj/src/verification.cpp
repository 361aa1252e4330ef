#include "gfd/verification.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gfd/errors.hpp"

namespace gfd {

namespace {

constexpr double kLambdaQ = 1.0; // first-order reconstruction schemes

double lambda_smooth(Vec2 p) { return std::exp(p.x - p.y * p.y); }
Vec2 lambda_smooth_grad(Vec2 p) {
    const double v = lambda_smooth(p);
    return {v, -2.0 * p.y * v};
}
double lambda_smooth_lap(Vec2 p) {
    return lambda_smooth(p) * (1.0 + 4.0 * p.y * p.y - 2.0);
}

std::string alpha_name(std::array<int, 2> a) {
    return "alpha=(" + std::to_string(a[0]) + "," + std::to_string(a[1]) + ")";
}

double row_inf_norm(const OperatorRow& row) {
    double m = 0.0;
    for (double c : row.coeffs) m = std::max(m, std::abs(c));
    return m;
}

struct Geometry {
    PointCloud cloud;
    StencilSet stencils;
};

Geometry make_geometry(double h, std::uint64_t seed) {
    Geometry g;
    g.cloud = generate_cloud(h, seed);
    g.stencils = build_stencils(g.cloud, 30);
    return g;
}

} // namespace

bool CheckReport::all_passed() const {
    for (const CheckEntry& e : entries)
        if (e.asserted && !e.pass) return false;
    return true;
}

void CheckReport::merge(const CheckReport& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

double fit_order(const std::vector<double>& h, const std::vector<double>& value) {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (!(value[k] > 0.0)) continue;
        xs.push_back(std::log(h[k]));
        ys.push_back(std::log(value[k]));
    }
    if (xs.size() < 2) return 0.0;
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
    return sxx == 0.0 ? 0.0 : sxy / sxx;
}

CheckReport check_consistency_suite(const ConsistencySpec& spec,
                                    const std::vector<double>& h_list, std::uint64_t seed) {
    CheckReport report;
    const MonomialBasis basis = MonomialBasis::full_2d(spec.order);
    const std::string name = (spec.derived ? "consistency/ddo" : "consistency/laplace") +
                             std::to_string(spec.order) +
                             (spec.derived ? "+" + recon_tag(spec.scheme) : "");

    // per-alpha residual maxima across the refinement levels
    std::vector<std::vector<double>> residuals(basis.size());
    for (double h : h_list) {
        Geometry g = make_geometry(h, seed);
        OperatorMatrix laplace = build_laplace(g.cloud, g.stencils, spec.order, false);
        DiffusivityField field;
        OperatorMatrix ddo;
        if (spec.derived) {
            field = sample_field(lambda_smooth, g.cloud, lambda_smooth_grad, lambda_smooth_lap);
            ddo = build_ddo(g.cloud, laplace, field, spec.scheme, GradientSource::analytic);
        }
        const OperatorMatrix& op = spec.derived ? ddo : laplace;

        for (int m = 0; m < basis.size(); ++m) {
            const auto alpha = basis.exponents[m];
            const int order = alpha[0] + alpha[1];
            double worst = 0.0;
            double worst_scaled = 0.0;
            for (int i = 0; i < g.cloud.size(); ++i) {
                if (g.cloud.is_boundary[i]) continue;
                const OperatorRow row = op.row(i);
                const Vec2 xi = g.cloud.points[i];
                double sum = 0.0;
                double phi_scale = 1.0;
                if (spec.derived && order == 0) {
                    // off-diagonals first, matching the builder's closing sum
                    sum = row.row_sum();
                } else {
                    phi_scale = 0.0;
                    for (std::size_t k = 0; k < row.indices.size(); ++k) {
                        const Vec2 d = g.cloud.points[row.indices[k]] - xi;
                        const double phi = mpow(d, alpha[0], alpha[1]);
                        sum += row.coeffs[k] * phi;
                        phi_scale = std::max(phi_scale, std::abs(phi));
                    }
                }
                double target = 0.0;
                if (!spec.derived) {
                    if ((alpha[0] == 2 && alpha[1] == 0) || (alpha[0] == 0 && alpha[1] == 2))
                        target = 2.0;
                } else {
                    if (order == 1) {
                        const Vec2 gl = lambda_smooth_grad(xi);
                        target = alpha[0] == 1 ? gl.x : gl.y;
                    } else if (order == 2 && (alpha[0] == 2 || alpha[1] == 2)) {
                        target = 2.0 * lambda_smooth(xi);
                    }
                }
                const double res = std::abs(sum - target);
                worst = std::max(worst, res);

                double norm2c = 0.0;
                for (double c : row.coeffs) norm2c += c * c;
                const double budget = 1e-8 * std::sqrt(norm2c) * std::max(phi_scale, 1e-30);
                worst_scaled = std::max(worst_scaled, res / std::max(budget, 1e-300));
            }
            residuals[m].push_back(worst);

            CheckEntry e;
            e.check = name;
            e.param = alpha_name(alpha);
            e.h = h;
            e.has_h = true;
            e.residual = worst;
            if (!spec.derived) {
                // hard reproducibility constraint, scaled budget
                e.pass = worst_scaled <= 1.0;
                e.asserted = true;
            } else if (order == 0) {
                // row sums close exactly by construction
                e.pass = worst == 0.0;
                e.asserted = true;
            }
            report.entries.push_back(e);
        }
    }

    if (spec.derived) {
        for (int m = 0; m < basis.size(); ++m) {
            const auto alpha = basis.exponents[m];
            const int order = alpha[0] + alpha[1];
            if (order == 0) continue;
            CheckEntry e;
            e.check = name;
            e.param = alpha_name(alpha) + " order";
            e.slope = fit_order(h_list, residuals[m]);
            e.has_slope = true;
            if (order == 1) {
                // reconstruction-limited decay
                e.pass = e.slope >= std::min<double>(spec.order, kLambdaQ) - 0.5;
                e.asserted = true;
            }
            report.entries.push_back(e);
        }
    }
    return report;
}

SignConditionReport check_sign_conditions(const OperatorMatrix& op) {
    SignConditionReport rep;
    rep.rows_total = op.size();
    for (int i = 0; i < op.size(); ++i) {
        const OperatorRow row = op.row(i);
        if (row.diagonal() == 0.0) {
            rep.zero_diagonal_indices.push_back(i);
            rep.violation_indices.push_back(i);
            continue;
        }
        if (satisfies_sign_condition(row))
            ++rep.rows_dd;
        else
            rep.violation_indices.push_back(i);
    }
    return rep;
}

CheckReport check_derived_operator_orders(const std::vector<double>& h_list,
                                          std::uint64_t seed) {
    CheckReport report;
    auto u = [](Vec2 p) { return std::sin(std::numbers::pi * p.x) * std::cos(std::numbers::pi * p.y); };
    auto grad_u = [](Vec2 p) -> Vec2 {
        const double pi = std::numbers::pi;
        return {pi * std::cos(pi * p.x) * std::cos(pi * p.y),
                -pi * std::sin(pi * p.x) * std::sin(pi * p.y)};
    };

    for (int order : {2, 4}) {
        std::vector<double> grad_err, interp_err, moment_err;
        for (double h : h_list) {
            Geometry g = make_geometry(h, seed);
            OperatorMatrix laplace = build_laplace(g.cloud, g.stencils, order, false);

            double worst_grad = 0.0, worst_interp = 0.0, worst_moment = 0.0;
            for (int i = 0; i < g.cloud.size(); ++i) {
                if (g.cloud.is_boundary[i]) continue;
                const OperatorRow row = laplace.row(i);
                const Vec2 xi = g.cloud.points[i];

                Vec2 grad_num{0.0, 0.0};
                double interp_num = 0.0;
                Vec2 xi_moment{0.0, 0.0};
                for (std::size_t k = 0; k < row.indices.size(); ++k) {
                    const int j = row.indices[k];
                    const Vec2 d = g.cloud.points[j] - xi;
                    const double uj = u(g.cloud.points[j]);
                    grad_num.x += 0.5 * row.coeffs[k] * d.x * uj;
                    grad_num.y += 0.5 * row.coeffs[k] * d.y * uj;
                    interp_num += 0.5 * row.coeffs[k] * d.x * d.x * uj;
                    if (j != i) {
                        const double xij = lambda_smooth(g.cloud.points[j]);
                        xi_moment.x += row.coeffs[k] * xij * d.x;
                        xi_moment.y += row.coeffs[k] * xij * d.y;
                    }
                }
                worst_grad = std::max(worst_grad, norm(grad_num - grad_u(xi)));
                worst_interp = std::max(worst_interp, std::abs(interp_num - u(xi)));
                const Vec2 target = 2.0 * lambda_smooth_grad(xi);
                worst_moment = std::max(worst_moment, norm(xi_moment - target));
            }
            grad_err.push_back(worst_grad);
            interp_err.push_back(worst_interp);
            moment_err.push_back(worst_moment);

            for (auto [tag, val] :
                 {std::pair{"gradient", worst_grad}, std::pair{"interpolation", worst_interp},
                  std::pair{"xi-moment", worst_moment}}) {
                CheckEntry e;
                e.check = "derived/p" + std::to_string(order);
                e.param = tag;
                e.h = h;
                e.has_h = true;
                e.residual = val;
                report.entries.push_back(e);
            }
        }
        for (auto [tag, errs] : {std::pair{"gradient", &grad_err},
                                 std::pair{"interpolation", &interp_err},
                                 std::pair{"xi-moment", &moment_err}}) {
            CheckEntry e;
            e.check = "derived/p" + std::to_string(order);
            e.param = std::string(tag) + " order";
            e.slope = fit_order(h_list, *errs);
            e.has_slope = true;
            e.pass = e.slope >= 1.5;
            e.asserted = true;
            report.entries.push_back(e);
        }
    }
    return report;
}

CheckReport check_enrichment_suite(const std::vector<double>& h_list, std::uint64_t seed,
                                   Recon scheme) {
    CheckReport report;
    const int order = 2;
    const MonomialBasis basis = MonomialBasis::full_2d(order);
    std::vector<std::vector<double>> lam_res(basis.size());
    std::vector<std::vector<double>> rec_res(basis.size());

    for (double h : h_list) {
        Geometry g = make_geometry(h, seed);
        OperatorMatrix laplace = build_laplace(g.cloud, g.stencils, order, false);
        DiffusivityField field =
            sample_field(lambda_smooth, g.cloud, lambda_smooth_grad, lambda_smooth_lap);
        OperatorMatrix ddo = build_ddo(g.cloud, laplace, field, scheme, GradientSource::analytic);

        std::vector<double> worst_lam(basis.size(), 0.0);
        std::vector<double> worst_rec(basis.size(), 0.0);
        std::vector<double> worst_rec_scaled(basis.size(), 0.0);
        for (int i = 0; i < g.cloud.size(); ++i) {
            if (g.cloud.is_boundary[i]) continue;
            const OperatorRow row = ddo.row(i);
            const EnrichmentReport er = enrichment_residuals(g.cloud, row, field, scheme, order,
                                                             GradientSource::analytic);
            const double rn = row_inf_norm(row);
            for (int m = 0; m < basis.size(); ++m) {
                if (!er.against_lambda[m].skipped)
                    worst_lam[m] =
                        std::max(worst_lam[m], std::abs(er.against_lambda[m].residual));
                if (!er.against_recon[m].skipped) {
                    const double res = std::abs(er.against_recon[m].residual);
                    worst_rec[m] = std::max(worst_rec[m], res);
                    const int ao = basis.order_of(m);
                    if (ao >= 1) {
                        const double budget = 1e-10 * rn * ipow(h, ao);
                        worst_rec_scaled[m] =
                            std::max(worst_rec_scaled[m], res / std::max(budget, 1e-300));
                    }
                }
            }
        }
        for (int m = 0; m < basis.size(); ++m) {
            const auto alpha = basis.exponents[m];
            lam_res[m].push_back(worst_lam[m]);
            rec_res[m].push_back(worst_rec[m]);

            CheckEntry a;
            a.check = "enrichment/" + recon_tag(scheme) + "/vs-lambda";
            a.param = alpha_name(alpha);
            a.h = h;
            a.has_h = true;
            a.residual = worst_lam[m];
            report.entries.push_back(a);

            CheckEntry b;
            b.check = "enrichment/" + recon_tag(scheme) + "/vs-recon";
            b.param = alpha_name(alpha);
            b.h = h;
            b.has_h = true;
            b.residual = worst_rec[m];
            if (basis.order_of(m) >= 1) {
                // exact cancellation of the reconstruction factors
                b.pass = worst_rec_scaled[m] <= 1.0;
                b.asserted = true;
            }
            report.entries.push_back(b);
        }
    }

    for (int m = 0; m < basis.size(); ++m) {
        const auto alpha = basis.exponents[m];
        const int ao = alpha[0] + alpha[1];
        CheckEntry e;
        e.check = "enrichment/" + recon_tag(scheme) + "/vs-lambda";
        e.param = alpha_name(alpha) + " order";
        e.slope = fit_order(h_list, lam_res[m]);
        e.has_slope = true;
        if (ao == 1) {
            e.pass = e.slope >= 0.5;
            e.asserted = true;
        }
        report.entries.push_back(e);
    }
    return report;
}

void write_check_report(const CheckReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw format_error("write_check_report: cannot open '" + path + "'");
    out << "check,param,h,residual,slope,pass\n";
    char buf[256];
    for (const CheckEntry& e : report.entries) {
        std::string h = e.has_h ? (std::snprintf(buf, sizeof(buf), "%.17g", e.h), buf) : "";
        std::string slope =
            e.has_slope ? (std::snprintf(buf, sizeof(buf), "%.6g", e.slope), buf) : "";
        std::snprintf(buf, sizeof(buf), "%s,%s,%s,%.6g,%s,%d\n", e.check.c_str(),
                      e.param.c_str(), h.c_str(), e.residual, slope.c_str(), e.pass ? 1 : 0);
        out << buf;
    }
}

std::string format_check_report(const CheckReport& report) {
    std::ostringstream out;
    for (const CheckEntry& e : report.entries) {
        out << (e.pass ? "  ok  " : " FAIL ") << e.check << "  " << e.param;
        if (e.has_h) out << "  h=" << e.h;
        out << "  residual=" << e.residual;
        if (e.has_slope) out << "  slope=" << e.slope;
        if (!e.asserted) out << "  (info)";
        out << "\n";
    }
    return out.str();
}

} // namespace gfd
