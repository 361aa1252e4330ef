#include "gfd/test_cases.hpp"

#include <cmath>
#include <numbers>

#include "gfd/errors.hpp"

namespace gfd {

namespace {

constexpr double kPi = std::numbers::pi;

double sin_product(Vec2 p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); }

Vec2 sin_product_gradient(Vec2 p) {
    return {kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y),
            kPi * std::sin(kPi * p.x) * std::cos(kPi * p.y)};
}

// q = -<grad lambda, grad u> - lambda*laplace(u) for u = sin(pi x)sin(pi y)
std::function<double(Vec2)> smooth_source(std::function<double(Vec2)> lambda,
                                          std::function<Vec2(Vec2)> grad_lambda) {
    return [lambda = std::move(lambda), grad_lambda = std::move(grad_lambda)](Vec2 p) {
        const double u = sin_product(p);
        const Vec2 gu = sin_product_gradient(p);
        return -dot(grad_lambda(p), gu) + lambda(p) * 2.0 * kPi * kPi * u;
    };
}

TestCase smooth_case_1() {
    TestCase tc;
    tc.u_bar = sin_product;
    tc.lambda = [](Vec2 p) { return std::exp(p.x - p.y * p.y); };
    tc.grad_lambda = [l = tc.lambda](Vec2 p) -> Vec2 {
        const double v = l(p);
        return {v, -2.0 * p.y * v};
    };
    tc.lambda_laplacian = [l = tc.lambda](Vec2 p) {
        return l(p) * (1.0 + 4.0 * p.y * p.y - 2.0);
    };
    tc.q_elliptic = smooth_source(tc.lambda, tc.grad_lambda);
    return tc;
}

TestCase smooth_case_2() {
    TestCase tc;
    tc.u_bar = sin_product;
    tc.lambda = [](Vec2 p) { return 2.0 + std::sin(6.0 * kPi * p.x) * std::sin(6.0 * kPi * p.y); };
    tc.grad_lambda = [](Vec2 p) -> Vec2 {
        const double c = 6.0 * kPi;
        return {c * std::cos(c * p.x) * std::sin(c * p.y),
                c * std::sin(c * p.x) * std::cos(c * p.y)};
    };
    tc.lambda_laplacian = [](Vec2 p) {
        const double c = 6.0 * kPi;
        return -2.0 * c * c * std::sin(c * p.x) * std::sin(c * p.y);
    };
    tc.q_elliptic = smooth_source(tc.lambda, tc.grad_lambda);
    return tc;
}

// u = f/lambda + c with f = sin(pi x)sin(pi y) - c vanishing on the
// interface where lambda jumps from 1 to 1e8; q = -laplace(f) stays smooth.
TestCase interface_case() {
    constexpr double c = 0.75;
    TestCase tc;
    auto f = [](Vec2 p) { return sin_product(p) - c; };
    tc.lambda = [f](Vec2 p) { return f(p) >= 0.0 ? 1e8 : 1.0; };
    tc.u_bar = [f, l = tc.lambda](Vec2 p) { return f(p) / l(p) + c; };
    tc.q_elliptic = [](Vec2 p) { return 2.0 * kPi * kPi * sin_product(p); };
    return tc;
}

void make_parabolic(TestCase& tc) {
    tc.parabolic = true;
    tc.a_of_t = [](double t) { return std::exp(-4.0 * t); };
    tc.a_prime_of_t = [](double t) { return -4.0 * std::exp(-4.0 * t); };
}

} // namespace

TestCase define_test_case(int id) {
    TestCase tc;
    switch (id) {
        case 1: tc = smooth_case_1(); break;
        case 2: tc = smooth_case_2(); break;
        case 3: tc = interface_case(); break;
        case 4:
            tc = smooth_case_1();
            make_parabolic(tc);
            break;
        case 5:
            tc = interface_case();
            make_parabolic(tc);
            break;
        default:
            throw parameter_error("define_test_case: unknown case id " + std::to_string(id));
    }
    tc.id = id;
    return tc;
}

} // namespace gfd
