#include "gfd/mls.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gfd/errors.hpp"

namespace gfd {

std::vector<double> weight_vector(const std::vector<double>& distances, double h_i) {
    std::vector<double> w(distances.size());
    for (std::size_t k = 0; k < distances.size(); ++k) w[k] = std::exp(-distances[k] / h_i);
    return w;
}

std::vector<double> rhs_laplace(const MonomialBasis& basis) {
    if (basis.degree < 2) throw parameter_error("rhs_laplace: basis degree must be >= 2");
    std::vector<double> b(basis.size(), 0.0);
    for (int m = 0; m < basis.size(); ++m) {
        const auto [ax, ay] = basis.exponents[m];
        if ((ax == 2 && ay == 0) || (ax == 0 && ay == 2)) b[m] = 2.0;
    }
    return b;
}

std::vector<double> rhs_gradient(const MonomialBasis& basis, int axis) {
    if (basis.degree < 2) throw parameter_error("rhs_gradient: basis degree must be >= 2");
    if (axis != 0 && axis != 1) throw parameter_error("rhs_gradient: axis must be 0 or 1");
    std::vector<double> b(basis.size(), 0.0);
    for (int m = 0; m < basis.size(); ++m) {
        const auto [ax, ay] = basis.exponents[m];
        if (axis == 0 && ax == 1 && ay == 0) b[m] = 1.0;
        if (axis == 1 && ax == 0 && ay == 1) b[m] = 1.0;
    }
    return b;
}

std::vector<double> rhs_diffusion(const MonomialBasis& basis, double lambda_i,
                                  Vec2 grad_lambda_i) {
    if (basis.degree < 2) throw parameter_error("rhs_diffusion: basis degree must be >= 2");
    std::vector<double> b(basis.size(), 0.0);
    for (int m = 0; m < basis.size(); ++m) {
        const auto [ax, ay] = basis.exponents[m];
        if (ax == 1 && ay == 0) b[m] = grad_lambda_i.x;
        if (ax == 0 && ay == 1) b[m] = grad_lambda_i.y;
        if ((ax == 2 && ay == 0) || (ax == 0 && ay == 2)) b[m] = 2.0 * lambda_i;
    }
    return b;
}

std::vector<double> solve_constrained_row(const std::vector<Vec2>& offsets, double h,
                                          const std::vector<double>& weights,
                                          const MonomialBasis& basis,
                                          const std::vector<double>& rhs, int pin_index,
                                          int point_index) {
    const int ns = static_cast<int>(offsets.size());
    const int nb = basis.size() + (pin_index >= 0 ? 1 : 0);
    if (static_cast<int>(weights.size()) != ns)
        throw parameter_error("solve_constrained_row: weights/offsets size mismatch");
    if (static_cast<int>(rhs.size()) != basis.size())
        throw parameter_error("solve_constrained_row: rhs/basis size mismatch");
    if (ns < nb)
        throw singular_stencil_error(point_index,
                                     "solve_constrained_row: stencil smaller than the "
                                     "constraint set at point " +
                                         std::to_string(point_index));

    // Constraint rows over scaled monomials; right-hand side rescaled to match.
    Eigen::MatrixXd K(nb, ns);
    Eigen::VectorXd b(nb);
    for (int m = 0; m < basis.size(); ++m) {
        for (int j = 0; j < ns; ++j) K(m, j) = basis.eval_scaled(m, offsets[j], h);
        b(m) = rhs[m] / ipow(h, basis.order_of(m));
    }
    if (pin_index >= 0) {
        K.row(nb - 1).setZero();
        K(nb - 1, pin_index) = 1.0;
        b(nb - 1) = 1.0;
    }

    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), ns);
    Eigen::VectorXd w2 = w.array().square().matrix();

    Eigen::MatrixXd A = K * w2.asDiagonal() * K.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    Eigen::VectorXd c;
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) {
        c = w2.asDiagonal() * K.transpose() * llt.solve(b);
    } else {
        // Minimum-norm solve of (K W) y = b through a column-pivoted
        // orthogonal factorization, then c = W y.
        Eigen::MatrixXd G = K * w.asDiagonal();
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(G);
        Eigen::VectorXd y = cod.solve(b);
        const double res = (G * y - b).norm();
        const double scale = std::max(1.0, b.norm());
        if (cod.rank() < nb && res > 1e-8 * scale)
            throw singular_stencil_error(point_index,
                                         "solve_constrained_row: rank-deficient stencil at "
                                         "point " +
                                             std::to_string(point_index));
        c = w.asDiagonal() * y;
    }

    return std::vector<double>(c.data(), c.data() + ns);
}

namespace {

std::vector<Vec2> stencil_offsets(const PointCloud& cloud, const StencilSet& st, int i) {
    std::vector<Vec2> offsets;
    offsets.reserve(st.indices[i].size());
    for (int j : st.indices[i]) offsets.push_back(cloud.points[j] - cloud.points[i]);
    return offsets;
}

int center_position(const StencilSet& st, int i) {
    const auto& idx = st.indices[i];
    for (std::size_t k = 0; k < idx.size(); ++k)
        if (idx[k] == i) return static_cast<int>(k);
    throw parameter_error("stencil of point " + std::to_string(i) + " does not contain i");
}

OperatorRow make_row(const StencilSet& st, int i, std::vector<double> coeffs) {
    OperatorRow row;
    row.center = i;
    row.indices = st.indices[i];
    row.coeffs = std::move(coeffs);
    return row;
}

// diag := -sum of off-diagonals, ascending index order.
void close_row_sum(OperatorRow& row) {
    double off = 0.0;
    int diag_pos = -1;
    for (std::size_t k = 0; k < row.indices.size(); ++k) {
        if (row.indices[k] == row.center)
            diag_pos = static_cast<int>(k);
        else
            off += row.coeffs[k];
    }
    row.coeffs[diag_pos] = -off;
}

} // namespace

OperatorRow solve_mls_row(const PointCloud& cloud, const StencilSet& stencils, int i,
                          const MonomialBasis& basis, const std::vector<double>& rhs) {
    const auto offsets = stencil_offsets(cloud, stencils, i);
    const auto weights = weight_vector(stencils.distances[i], stencils.effective_h[i]);
    return make_row(stencils, i,
                    solve_constrained_row(offsets, stencils.effective_h[i], weights, basis,
                                          rhs, -1, i));
}

OperatorRow zero_functional_row(const PointCloud& cloud, const StencilSet& stencils, int i,
                                const MonomialBasis& basis) {
    const auto offsets = stencil_offsets(cloud, stencils, i);
    const auto weights = weight_vector(stencils.distances[i], stencils.effective_h[i]);
    const std::vector<double> rhs(basis.size(), 0.0);
    return make_row(stencils, i,
                    solve_constrained_row(offsets, stencils.effective_h[i], weights, basis,
                                          rhs, center_position(stencils, i), i));
}

double dd_correction_alpha(const OperatorRow& row, const OperatorRow& zero_row) {
    if (row.indices != zero_row.indices || row.center != zero_row.center)
        throw parameter_error("dd_correction_alpha: rows use different stencils");
    const double d = row.diagonal();
    double num = 0.0, den = 0.0, b2 = 0.0;
    for (std::size_t k = 0; k < row.indices.size(); ++k) {
        if (row.indices[k] == row.center) continue;
        const double a = row.coeffs[k];
        const double b = zero_row.coeffs[k];
        num += a * (b * d - a);
        den += b * (b * d - a);
        b2 += b * b;
    }
    if (std::abs(den) < 1e-14 * b2 || b2 == 0.0) return 0.0;
    return -num / den;
}

OperatorRow correct_diagonal_dominance(const OperatorRow& row, const OperatorRow& zero_row) {
    const double alpha = dd_correction_alpha(row, zero_row);
    OperatorRow out = row;
    for (std::size_t k = 0; k < out.coeffs.size(); ++k)
        out.coeffs[k] += alpha * zero_row.coeffs[k];
    return out;
}

bool satisfies_sign_condition(const OperatorRow& row) {
    const double d = row.diagonal();
    if (d == 0.0) return false;
    for (std::size_t k = 0; k < row.indices.size(); ++k) {
        if (row.indices[k] == row.center) continue;
        if (row.coeffs[k] * d > 0.0) return false;
    }
    return true;
}

OperatorMatrix build_laplace(const PointCloud& cloud, const StencilSet& stencils, int order,
                             bool dd_correction) {
    if (order != 2 && order != 4) throw parameter_error("build_laplace: order must be 2 or 4");
    const MonomialBasis basis = MonomialBasis::full_2d(order);
    const std::vector<double> rhs = rhs_laplace(basis);

    std::vector<OperatorRow> rows;
    rows.reserve(cloud.size());
    for (int i = 0; i < cloud.size(); ++i) {
        OperatorRow row = solve_mls_row(cloud, stencils, i, basis, rhs);
        if (dd_correction &&
            static_cast<int>(stencils.indices[i].size()) >= basis.size() + 1) {
            row = correct_diagonal_dominance(row,
                                             zero_functional_row(cloud, stencils, i, basis));
        }
        close_row_sum(row);
        rows.push_back(std::move(row));
    }
    OperatorMatrix op = assemble_rows(rows, OperatorKind::laplace, order);
    op.dd_corrected = dd_correction;
    return op;
}

std::pair<OperatorMatrix, OperatorMatrix> build_gradient(const PointCloud& cloud,
                                                         const StencilSet& stencils) {
    const MonomialBasis basis = MonomialBasis::full_2d(2);
    const std::vector<double> bx = rhs_gradient(basis, 0);
    const std::vector<double> by = rhs_gradient(basis, 1);
    std::vector<OperatorRow> rx, ry;
    rx.reserve(cloud.size());
    ry.reserve(cloud.size());
    for (int i = 0; i < cloud.size(); ++i) {
        rx.push_back(solve_mls_row(cloud, stencils, i, basis, bx));
        ry.push_back(solve_mls_row(cloud, stencils, i, basis, by));
    }
    return {assemble_rows(rx, OperatorKind::gradient_x, 2),
            assemble_rows(ry, OperatorKind::gradient_y, 2)};
}

OperatorRow derive_operator(const PointCloud& cloud, const OperatorRow& laplace_row,
                            std::array<int, 2> alpha, const std::vector<double>& xi_values) {
    if (xi_values.size() != laplace_row.indices.size())
        throw parameter_error("derive_operator: xi_values/stencil size mismatch");
    const bool zeroth = alpha[0] == 0 && alpha[1] == 0;
    const Vec2 xi = cloud.points[laplace_row.center];

    OperatorRow out;
    out.center = laplace_row.center;
    out.indices = laplace_row.indices;
    out.coeffs.assign(laplace_row.indices.size(), 0.0);
    double off_sum = 0.0;
    int diag_pos = -1;
    for (std::size_t k = 0; k < out.indices.size(); ++k) {
        if (out.indices[k] == out.center) {
            diag_pos = static_cast<int>(k);
            continue;
        }
        const Vec2 d = cloud.points[out.indices[k]] - xi;
        out.coeffs[k] = xi_values[k] * laplace_row.coeffs[k] * mpow(d, alpha[0], alpha[1]);
        off_sum += out.coeffs[k];
    }
    out.coeffs[diag_pos] = zeroth ? -off_sum : 0.0;
    return out;
}

} // namespace gfd
