#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gfd/kernels.hpp"
#include "gfd/sparse.hpp"

using namespace gfd;

namespace {

struct IsaGuard {
    kernels::Isa saved = kernels::active_isa();
    ~IsaGuard() { kernels::set_isa(saved); }
};

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale) {
    std::normal_distribution<double> dist(0.0, scale);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

} // namespace

TEST_CASE("vector kernels: avx2 variant matches the scalar reference") {
    if (kernels::best_supported_isa() != kernels::Isa::avx2) {
        MESSAGE("avx2 unavailable; skipping equivalence");
        return;
    }
    IsaGuard guard;
    std::mt19937_64 rng(123);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1001u, 4096u}) {
        auto x = random_vector(rng, n, 1.0);
        auto y = random_vector(rng, n, 2.0);

        kernels::set_isa(kernels::Isa::scalar);
        const double dot_ref = kernels::dot(x, y);
        const double nrm_ref = kernels::nrm2(x);
        auto axpy_ref = y;
        kernels::axpy(0.37, x, axpy_ref);

        kernels::set_isa(kernels::Isa::avx2);
        const double dot_simd = kernels::dot(x, y);
        const double nrm_simd = kernels::nrm2(x);
        auto axpy_simd = y;
        kernels::axpy(0.37, x, axpy_simd);

        double abs_scale = 1e-30;
        for (std::size_t i = 0; i < n; ++i) abs_scale += std::abs(x[i] * y[i]);
        CHECK(std::abs(dot_simd - dot_ref) <= 1e-13 * abs_scale);
        CHECK(nrm_simd == doctest::Approx(nrm_ref).epsilon(1e-13));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(axpy_simd[i] == doctest::Approx(axpy_ref[i]).epsilon(1e-13));
    }
}

TEST_CASE("csr_matvec: both variants match a dense triple loop") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> len_dist(0, 9);
    std::uniform_int_distribution<int> col_dist(0, 49);

    CsrMatrix m;
    m.n = 50;
    m.row_ptr.push_back(0);
    for (int i = 0; i < m.n; ++i) {
        const int len = (i == 13) ? 0 : len_dist(rng); // keep one empty row
        for (int k = 0; k < len; ++k) {
            m.col_idx.push_back(col_dist(rng));
            m.values.push_back(std::normal_distribution<double>(0.0, 3.0)(rng));
        }
        m.row_ptr.push_back(static_cast<int>(m.col_idx.size()));
    }
    const auto x = random_vector(rng, m.n, 1.0);

    std::vector<double> dense(m.n, 0.0);
    for (int i = 0; i < m.n; ++i)
        for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
            dense[i] += m.values[k] * x[m.col_idx[k]];

    IsaGuard guard;
    for (kernels::Isa isa : {kernels::Isa::scalar, kernels::best_supported_isa()}) {
        kernels::set_isa(isa);
        std::vector<double> y;
        m.matvec(x, y);
        REQUIRE(y.size() == static_cast<std::size_t>(m.n));
        for (int i = 0; i < m.n; ++i)
            CHECK(y[i] == doctest::Approx(dense[i]).epsilon(1e-13));
    }
}

TEST_CASE("kernel dispatch: variants are reproducible run to run") {
    std::mt19937_64 rng(99);
    const auto x = random_vector(rng, 777, 1.0);
    const auto y = random_vector(rng, 777, 1.0);
    const double first = kernels::dot(x, y);
    for (int rep = 0; rep < 5; ++rep) CHECK(kernels::dot(x, y) == first);
}
