#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace gfd::kernels {

// Vector and sparse-matrix inner loops used by the iterative solver.
// Each kernel has a scalar reference implementation and an AVX2 variant;
// the active variant is selected once at startup from CPU capabilities
// and can be overridden (tests compare the variants against each other).
//
// Within one variant, reduction order is fixed, so repeated runs of the
// same binary on the same machine produce bit-identical results.

enum class Isa { scalar, avx2 };

Isa best_supported_isa();
Isa active_isa();
void set_isa(Isa isa);
std::string isa_name(Isa isa);

double dot(std::span<const double> x, std::span<const double> y);
double nrm2(std::span<const double> x);

// y += a*x
void axpy(double a, std::span<const double> x, std::span<double> y);

// y = A*x for an n-row CSR matrix
void csr_matvec(int n, const int* row_ptr, const int* col_idx, const double* values,
                const double* x, double* y);

namespace detail {
struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*nrm2)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*csr_matvec)(int, const int*, const int*, const double*, const double*, double*);
};
const KernelTable& scalar_table();
const KernelTable& avx2_table(); // valid only if best_supported_isa() == avx2
} // namespace detail

} // namespace gfd::kernels
