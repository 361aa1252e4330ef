#pragma once

#include <functional>
#include <string>

#include "gfd/geometry.hpp"

namespace gfd {

// Manufactured problems on the unit square with homogeneous Dirichlet
// data: elliptic -div(lambda grad u) = q, or the heat equation with
// solution a(t)*u_bar(x).
struct TestCase {
    int id = 0;
    bool parabolic = false;

    std::function<double(Vec2)> u_bar;       // spatial solution
    std::function<double(Vec2)> lambda;
    std::function<Vec2(Vec2)> grad_lambda;      // empty for the interface cases
    std::function<double(Vec2)> lambda_laplacian; // empty for the interface cases
    std::function<double(Vec2)> q_elliptic;  // -div(lambda grad u_bar)

    std::function<double(double)> a_of_t;       // parabolic only
    std::function<double(double)> a_prime_of_t;

    double a(double t) const { return parabolic ? a_of_t(t) : 1.0; }
    double a_prime(double t) const { return parabolic ? a_prime_of_t(t) : 0.0; }

    // dU/dt - div(lambda grad U) for U = a(t) u_bar.
    double q_time(Vec2 x, double t) const {
        return a_prime(t) * u_bar(x) + a(t) * q_elliptic(x);
    }
    double reference(Vec2 x, double t) const { return a(t) * u_bar(x); }
};

// id in 1..5. 1,2: smooth diffusivities; 3: piecewise-constant diffusivity
// with an eight-order jump; 4,5: parabolic wrappers of 1 and 3.
TestCase define_test_case(int id);

} // namespace gfd
