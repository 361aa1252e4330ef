#pragma once

#include <vector>

#include "gfd/sparse.hpp"
#include "gfd/stencil.hpp"

namespace gfd {

struct TestCase;

struct LinearSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
};

// Replace boundary rows with identity rows and zero their rhs entries.
LinearSystem apply_dirichlet(LinearSystem system, const std::vector<bool>& boundary);

// Jacobi-preconditioned BiCGStab from a zero initial guess, converged at
// ||r|| <= rel_tol*||b||, capped at 20*n iterations. Breakdown or cap
// falls back to a dense factorization for n <= 4000 and fails otherwise.
std::vector<double> solve_sparse(const LinearSystem& system, double rel_tol);

// Solve (-L) u = q with homogeneous Dirichlet rows, rel_tol 1e-10.
std::vector<double> solve_poisson(const OperatorMatrix& op, const std::vector<double>& q,
                                  const std::vector<bool>& boundary);

// Largest dt = horizon/M with dt <= 0.7*dx^2 and M a positive integer.
double cfl_dt(double dx, double horizon);

// One implicit trapezoidal step:
// (I - dt/2 L) u1 = (I + dt/2 L) u0 + dt/2 (q0 + q1), boundary rows pinned.
std::vector<double> step_trapezoidal(const OperatorMatrix& op, const std::vector<double>& u0,
                                     const std::vector<double>& q0,
                                     const std::vector<double>& q1, double dt,
                                     const std::vector<bool>& boundary);

// March the heat equation to t = horizon in uniform trapezoidal steps with
// the case's initial condition and time-dependent source. The constant
// step matrix is factored once; every step's relative residual is checked
// against 1e-10.
std::vector<double> solve_heat(const OperatorMatrix& op, const PointCloud& cloud,
                               const std::vector<bool>& boundary, const TestCase& tc,
                               double dt, double horizon);

// ||u_ref - u_h||_v / ||u_ref||_v with the weighted discrete norm
// ||u||_v = sqrt(sum v_i u_i^2).
double discrete_l2_error(const std::vector<double>& u_h, const std::vector<double>& u_ref,
                         const std::vector<double>& weights);

} // namespace gfd
