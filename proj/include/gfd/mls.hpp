#pragma once

#include <array>
#include <utility>
#include <vector>

#include "gfd/basis.hpp"
#include "gfd/sparse.hpp"
#include "gfd/stencil.hpp"

namespace gfd {

// w(r) = exp(-r) with r the distance relative to the effective smoothing
// length; the center weight is 1.
std::vector<double> weight_vector(const std::vector<double>& distances, double h_i);

// Constraint right-hand sides over a basis, in the unscaled monomials.
// The row solver rescales them internally.
std::vector<double> rhs_laplace(const MonomialBasis& basis);
std::vector<double> rhs_gradient(const MonomialBasis& basis, int axis);
std::vector<double> rhs_diffusion(const MonomialBasis& basis, double lambda_i,
                                  Vec2 grad_lambda_i);

// Minimum-weighted-norm coefficients subject to the reproducibility
// constraints: c = W^2 K^T (K W^2 K^T)^{-1} b on the scaled monomials.
// An ill-conditioned normal matrix falls back to a rank-revealing
// orthogonal factorization. pin_index >= 0 appends the constraint
// c[pin_index] = 1. point_index only labels errors.
std::vector<double> solve_constrained_row(const std::vector<Vec2>& offsets, double h,
                                          const std::vector<double>& weights,
                                          const MonomialBasis& basis,
                                          const std::vector<double>& rhs, int pin_index = -1,
                                          int point_index = -1);

OperatorRow solve_mls_row(const PointCloud& cloud, const StencilSet& stencils, int i,
                          const MonomialBasis& basis, const std::vector<double>& rhs);

// Non-trivial kernel row: reproduces zero on every basis monomial with the
// center coefficient pinned to 1.
OperatorRow zero_functional_row(const PointCloud& cloud, const StencilSet& stencils, int i,
                                const MonomialBasis& basis);

// Closed-form minimizer of sum_j ((c_ij + a*c0_ij)/(c_ii + a*c0_ii))^2 over a.
double dd_correction_alpha(const OperatorRow& row, const OperatorRow& zero_row);
OperatorRow correct_diagonal_dominance(const OperatorRow& row, const OperatorRow& zero_row);

// c_ii != 0 and c_ij*c_ii <= 0 for every neighbor.
bool satisfies_sign_condition(const OperatorRow& row);

// order in {2, 4}. Boundary rows are assembled like interior ones; the
// solver replaces them later. Diagonals are re-derived as minus the
// off-diagonal sum, so Laplace row sums vanish exactly.
OperatorMatrix build_laplace(const PointCloud& cloud, const StencilSet& stencils, int order,
                             bool dd_correction);

// Second-order discrete gradient, one matrix per component.
std::pair<OperatorMatrix, OperatorMatrix> build_gradient(const PointCloud& cloud,
                                                         const StencilSet& stencils);

// New row with off-diagonals xi_j * c_ij * (x_j - x_i)^alpha. For
// alpha = 0 the diagonal closes the row sum; otherwise it vanishes.
// xi_values aligns with row.indices.
OperatorRow derive_operator(const PointCloud& cloud, const OperatorRow& laplace_row,
                            std::array<int, 2> alpha, const std::vector<double>& xi_values);

} // namespace gfd
