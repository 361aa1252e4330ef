#include "gfd/diffusion.hpp"

#include <cmath>

#include "gfd/errors.hpp"

namespace gfd {

DiffusivityField sample_field(std::function<double(Vec2)> lambda, const PointCloud& cloud,
                              std::function<Vec2(Vec2)> analytic_gradient,
                              std::function<double(Vec2)> analytic_laplacian) {
    DiffusivityField f;
    f.lambda = std::move(lambda);
    f.analytic_gradient = std::move(analytic_gradient);
    f.analytic_laplacian = std::move(analytic_laplacian);
    f.values.reserve(cloud.size());
    for (const Vec2& p : cloud.points) {
        const double v = f.lambda(p);
        if (!(v > 0.0))
            throw parameter_error("sample_field: non-positive diffusivity at a cloud point");
        f.values.push_back(v);
    }
    return f;
}

void attach_discrete_gradients(DiffusivityField& field, const OperatorMatrix& grad_x,
                               const OperatorMatrix& grad_y) {
    std::vector<double> gx, gy;
    grad_x.mat.matvec(field.values, gx);
    grad_y.mat.matvec(field.values, gy);
    field.discrete_gradient.resize(field.values.size());
    for (std::size_t i = 0; i < field.values.size(); ++i)
        field.discrete_gradient[i] = {gx[i], gy[i]};
}

Recon recon_from_tag(const std::string& tag) {
    if (tag == "am") return Recon::am;
    if (tag == "hm") return Recon::hm;
    if (tag == "gm") return Recon::gm;
    if (tag == "taylor") return Recon::taylor;
    if (tag == "skew") return Recon::skew_taylor;
    if (tag == "gr") return Recon::gr;
    throw parameter_error("unknown reconstruction tag '" + tag + "'");
}

std::string recon_tag(Recon scheme) {
    switch (scheme) {
        case Recon::am: return "am";
        case Recon::hm: return "hm";
        case Recon::gm: return "gm";
        case Recon::taylor: return "taylor";
        case Recon::skew_taylor: return "skew";
        case Recon::gr: return "gr";
    }
    return "?";
}

bool recon_needs_gradient(Recon scheme) {
    return scheme == Recon::taylor || scheme == Recon::skew_taylor || scheme == Recon::gr;
}

double reconstruct(Recon scheme, double lambda_i, double lambda_j, Vec2 grad_i, Vec2 grad_j,
                   Vec2 d_ij) {
    switch (scheme) {
        case Recon::am:
            return 0.5 * (lambda_i + lambda_j);
        case Recon::hm:
            if (!(lambda_i > 0.0) || !(lambda_j > 0.0))
                throw std::domain_error("reconstruct: harmonic mean needs positive values");
            return 2.0 * lambda_i * lambda_j / (lambda_i + lambda_j);
        case Recon::gm:
            if (!(lambda_i > 0.0) || !(lambda_j > 0.0))
                throw std::domain_error("reconstruct: geometric mean needs positive values");
            return std::sqrt(lambda_i * lambda_j);
        case Recon::taylor:
            return lambda_i + 0.5 * dot(grad_i, d_ij);
        case Recon::skew_taylor:
            return lambda_j - 0.5 * dot(grad_i, d_ij);
        case Recon::gr:
            return 0.5 * (lambda_i + lambda_j) + 0.125 * dot(grad_i - grad_j, d_ij);
    }
    throw parameter_error("reconstruct: unknown scheme");
}

namespace {

struct PairRecon {
    Recon scheme;
    GradientSource source;
    const DiffusivityField* field;
    long clamps = 0;

    double operator()(const PointCloud& cloud, int i, int j) {
        const double li = field->values[i];
        const double lj = field->values[j];
        Vec2 gi{}, gj{};
        if (recon_needs_gradient(scheme)) {
            if (source == GradientSource::analytic) {
                if (!field->has_analytic_gradient())
                    throw parameter_error("reconstruction scheme '" + recon_tag(scheme) +
                                          "' needs a gradient, none available");
                gi = field->analytic_gradient(cloud.points[i]);
                gj = field->analytic_gradient(cloud.points[j]);
            } else {
                if (!field->has_discrete_gradient())
                    throw parameter_error("reconstruction scheme '" + recon_tag(scheme) +
                                          "' needs discrete gradients, none attached");
                gi = field->discrete_gradient[i];
                gj = field->discrete_gradient[j];
            }
        }
        double lij;
        try {
            lij = reconstruct(scheme, li, lj, gi, gj, cloud.points[j] - cloud.points[i]);
        } catch (const std::domain_error& e) {
            throw numerical_error(std::string(e.what()) + " at pair (" + std::to_string(i) +
                                  "," + std::to_string(j) + ")");
        }
        if (lij <= 0.0 && recon_needs_gradient(scheme)) {
            lij = reconstruct(Recon::hm, li, lj, {}, {}, {});
            ++clamps;
        }
        return lij;
    }
};

} // namespace

OperatorMatrix build_ddo(const PointCloud& cloud, const OperatorMatrix& laplace,
                         const DiffusivityField& field, Recon scheme,
                         GradientSource grad_source) {
    if (static_cast<int>(field.values.size()) != laplace.size())
        throw parameter_error("build_ddo: field sampled on a different cloud");
    PairRecon recon{scheme, grad_source, &field};

    std::vector<OperatorRow> rows;
    rows.reserve(laplace.size());
    for (int i = 0; i < laplace.size(); ++i) {
        OperatorRow lap = laplace.row(i);
        OperatorRow out;
        out.center = i;
        out.indices = lap.indices;
        out.coeffs.assign(lap.indices.size(), 0.0);
        double off_sum = 0.0;
        int diag_pos = -1;
        for (std::size_t k = 0; k < lap.indices.size(); ++k) {
            const int j = lap.indices[k];
            if (j == i) {
                diag_pos = static_cast<int>(k);
                continue;
            }
            out.coeffs[k] = recon(cloud, i, j) * lap.coeffs[k];
            off_sum += out.coeffs[k];
        }
        out.coeffs[diag_pos] = -off_sum;
        rows.push_back(std::move(out));
    }
    OperatorMatrix op = assemble_rows(rows, OperatorKind::diffusion, laplace.basis_degree);
    op.dd_corrected = laplace.dd_corrected;
    op.clamp_count = recon.clamps;
    return op;
}

OperatorMatrix build_mls_diffusion(const PointCloud& cloud, const StencilSet& stencils,
                                   const DiffusivityField& field, int order,
                                   GradientSource grad_source) {
    if (order != 2 && order != 4)
        throw parameter_error("build_mls_diffusion: order must be 2 or 4");
    if (static_cast<int>(field.values.size()) != cloud.size())
        throw parameter_error("build_mls_diffusion: field sampled on a different cloud");
    const MonomialBasis basis = MonomialBasis::full_2d(order);

    auto gradient_at = [&](int i) -> Vec2 {
        if (grad_source == GradientSource::analytic) {
            if (!field.has_analytic_gradient())
                throw parameter_error("build_mls_diffusion: no analytic gradient available");
            return field.analytic_gradient(cloud.points[i]);
        }
        if (!field.has_discrete_gradient())
            throw parameter_error("build_mls_diffusion: no discrete gradients attached");
        return field.discrete_gradient[i];
    };

    std::vector<OperatorRow> rows;
    rows.reserve(cloud.size());
    for (int i = 0; i < cloud.size(); ++i) {
        const std::vector<double> rhs = rhs_diffusion(basis, field.values[i], gradient_at(i));
        rows.push_back(solve_mls_row(cloud, stencils, i, basis, rhs));
    }
    return assemble_rows(rows, OperatorKind::diffusion, order);
}

OperatorMatrix build_fvm_laplace(const VoronoiDiagram& diagram, const PointCloud& cloud) {
    if (diagram.size() != cloud.size())
        throw parameter_error("build_fvm_laplace: diagram/cloud size mismatch");
    std::vector<OperatorRow> rows;
    rows.reserve(cloud.size());
    for (int i = 0; i < cloud.size(); ++i) {
        OperatorRow row;
        row.center = i;
        // merge the ascending neighbor list with the diagonal slot
        const auto& adj = diagram.adjacency[i];
        std::size_t a = 0;
        while (a < adj.size() && adj[a] < i) {
            row.indices.push_back(adj[a]);
            ++a;
        }
        const int diag_pos = static_cast<int>(row.indices.size());
        row.indices.push_back(i);
        for (; a < adj.size(); ++a) row.indices.push_back(adj[a]);

        row.coeffs.assign(row.indices.size(), 0.0);
        double off_sum = 0.0;
        for (std::size_t k = 0; k < adj.size(); ++k) {
            const int j = adj[k];
            const double measure = diagram.faces[diagram.face_of[i][k]].measure;
            const double f =
                measure / (diagram.volumes[i] * dist(cloud.points[j], cloud.points[i]));
            const std::size_t pos = (j < i) ? k : k + 1;
            row.coeffs[pos] = f;
            off_sum += f;
        }
        row.coeffs[diag_pos] = -off_sum;
        rows.push_back(std::move(row));
    }
    return assemble_rows(rows, OperatorKind::laplace, 0);
}

OperatorMatrix build_fvm_diffusion(const VoronoiDiagram& diagram, const PointCloud& cloud,
                                   const DiffusivityField& field, Recon scheme,
                                   GradientSource grad_source) {
    OperatorMatrix lap = build_fvm_laplace(diagram, cloud);
    PairRecon recon{scheme, grad_source, &field};

    std::vector<OperatorRow> rows;
    rows.reserve(lap.size());
    for (int i = 0; i < lap.size(); ++i) {
        OperatorRow row = lap.row(i);
        double off_sum = 0.0;
        int diag_pos = -1;
        for (std::size_t k = 0; k < row.indices.size(); ++k) {
            if (row.indices[k] == i) {
                diag_pos = static_cast<int>(k);
                continue;
            }
            row.coeffs[k] *= recon(cloud, i, row.indices[k]);
            off_sum += row.coeffs[k];
        }
        row.coeffs[diag_pos] = -off_sum;
        rows.push_back(std::move(row));
    }
    OperatorMatrix op = assemble_rows(rows, OperatorKind::diffusion, 0);
    op.clamp_count = recon.clamps;
    return op;
}

EnrichmentReport enrichment_residuals(const PointCloud& cloud, const OperatorRow& ddo_row,
                                      const DiffusivityField& field, Recon scheme,
                                      int basis_degree, GradientSource grad_source) {
    const int i = ddo_row.center;
    const Vec2 xi = cloud.points[i];
    const double li = field.values[i];
    PairRecon recon{scheme, grad_source, &field};

    EnrichmentReport report;
    const MonomialBasis basis = MonomialBasis::full_2d(basis_degree);
    for (int m = 0; m < basis.size(); ++m) {
        const auto alpha = basis.exponents[m];
        const int order = alpha[0] + alpha[1];

        // Row applied to (x - x_i)^alpha / lambda(x).
        EnrichmentEntry vs_lambda;
        vs_lambda.alpha = alpha;
        double sum = 0.0;
        for (std::size_t k = 0; k < ddo_row.indices.size(); ++k) {
            const int j = ddo_row.indices[k];
            const Vec2 d = cloud.points[j] - xi;
            sum += ddo_row.coeffs[k] * mpow(d, alpha[0], alpha[1]) / field.values[j];
        }
        if (order == 0) {
            if (field.analytic_laplacian && field.has_analytic_gradient()) {
                const Vec2 g = field.analytic_gradient(xi);
                const double lap = field.analytic_laplacian(xi);
                vs_lambda.target = -(lap / li - norm2(g) / (li * li)); // -laplacian(log l)
            } else {
                vs_lambda.skipped = true;
            }
        } else if (order == 1) {
            if (field.has_analytic_gradient()) {
                const Vec2 g = field.analytic_gradient(xi);
                vs_lambda.target = -(alpha[0] == 1 ? g.x : g.y) / li;
            } else {
                vs_lambda.skipped = true;
            }
        } else if (order == 2) {
            vs_lambda.target = (alpha[0] == 2 || alpha[1] == 2) ? 2.0 : 0.0;
        } else {
            vs_lambda.target = 0.0;
        }
        vs_lambda.residual = vs_lambda.skipped ? 0.0 : sum - vs_lambda.target;
        report.against_lambda.push_back(vs_lambda);

        // Row applied to (x - x_i)^alpha / lambda_recon(x); at the center
        // the reconstruction equals lambda_i for every scheme.
        EnrichmentEntry vs_recon;
        vs_recon.alpha = alpha;
        double rsum = 0.0;
        for (std::size_t k = 0; k < ddo_row.indices.size(); ++k) {
            const int j = ddo_row.indices[k];
            const Vec2 d = cloud.points[j] - xi;
            const double denom = (j == i) ? li : recon(cloud, i, j);
            rsum += ddo_row.coeffs[k] * mpow(d, alpha[0], alpha[1]) / denom;
        }
        if (order == 0) {
            if (field.analytic_laplacian) {
                vs_recon.target = -field.analytic_laplacian(xi) / (4.0 * li);
            } else {
                vs_recon.skipped = true;
            }
        } else if (order == 2) {
            vs_recon.target = (alpha[0] == 2 || alpha[1] == 2) ? 2.0 : 0.0;
        } else {
            vs_recon.target = 0.0;
        }
        vs_recon.residual = vs_recon.skipped ? 0.0 : rsum - vs_recon.target;
        report.against_recon.push_back(vs_recon);
    }
    return report;
}

} // namespace gfd
