#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gfd/mls.hpp"
#include "gfd/voronoi.hpp"

namespace gfd {

// Scalar diffusivity with optional analytic derivatives and optional
// discrete gradients obtained from the gradient operator.
struct DiffusivityField {
    std::function<double(Vec2)> lambda;
    std::function<Vec2(Vec2)> analytic_gradient;    // may be empty
    std::function<double(Vec2)> analytic_laplacian; // may be empty

    std::vector<double> values;          // samples at cloud points
    std::vector<Vec2> discrete_gradient; // empty until attached

    bool has_analytic_gradient() const { return static_cast<bool>(analytic_gradient); }
    bool has_discrete_gradient() const { return !discrete_gradient.empty(); }
};

DiffusivityField sample_field(std::function<double(Vec2)> lambda, const PointCloud& cloud,
                              std::function<Vec2(Vec2)> analytic_gradient = {},
                              std::function<double(Vec2)> analytic_laplacian = {});

// Fills discrete_gradient by applying the two gradient matrices to the
// sampled values.
void attach_discrete_gradients(DiffusivityField& field, const OperatorMatrix& grad_x,
                               const OperatorMatrix& grad_y);

enum class Recon { am, hm, gm, taylor, skew_taylor, gr };

Recon recon_from_tag(const std::string& tag); // {am,hm,gm,taylor,skew,gr}
std::string recon_tag(Recon scheme);
bool recon_needs_gradient(Recon scheme);

// Midpoint reconstruction of the diffusivity along the segment i -> j.
// d_ij = x_j - x_i. Gradients are only read by the Taylor-family schemes.
double reconstruct(Recon scheme, double lambda_i, double lambda_j, Vec2 grad_i, Vec2 grad_j,
                   Vec2 d_ij);

enum class GradientSource { discrete, analytic };

// Derived diffusion operator: off-diagonals lambda_ij * c_ij over the
// Laplacian's stencil, diagonal closing the row sum exactly. Non-positive
// Taylor-family reconstructions are clamped to the harmonic mean of the
// endpoints; clamp events are counted on the returned operator.
OperatorMatrix build_ddo(const PointCloud& cloud, const OperatorMatrix& laplace,
                         const DiffusivityField& field, Recon scheme,
                         GradientSource grad_source = GradientSource::discrete);

// Classical MLS diffusion rows: first-order constraints from the
// diffusivity gradient, second-order constraints scaled by lambda.
OperatorMatrix build_mls_diffusion(const PointCloud& cloud, const StencilSet& stencils,
                                   const DiffusivityField& field, int order,
                                   GradientSource grad_source = GradientSource::discrete);

// Finite-volume rows from Voronoi face measures and cell volumes.
OperatorMatrix build_fvm_laplace(const VoronoiDiagram& diagram, const PointCloud& cloud);
OperatorMatrix build_fvm_diffusion(const VoronoiDiagram& diagram, const PointCloud& cloud,
                                   const DiffusivityField& field, Recon scheme,
                                   GradientSource grad_source = GradientSource::discrete);

// Residuals of the enrichment identities for one diffusion row: the row
// applied to (x_j - x_i)^alpha / lambda(x_j) and to
// (x_j - x_i)^alpha / lambda_recon(x_j) minus their limit targets.
struct EnrichmentEntry {
    std::array<int, 2> alpha{0, 0};
    double residual = 0.0;
    double target = 0.0;
    bool skipped = false; // analytic derivatives unavailable for the target
};
struct EnrichmentReport {
    std::vector<EnrichmentEntry> against_lambda; // targets with log-derivatives
    std::vector<EnrichmentEntry> against_recon;  // Laplace-like targets
};
EnrichmentReport enrichment_residuals(const PointCloud& cloud, const OperatorRow& ddo_row,
                                      const DiffusivityField& field, Recon scheme,
                                      int basis_degree,
                                      GradientSource grad_source = GradientSource::discrete);

} // namespace gfd
