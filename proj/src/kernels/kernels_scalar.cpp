#include "gfd/kernels.hpp"

#include <cmath>

// Reference kernels. Plain sequential loops; no reassociation, so these
// define the baseline the vector variants are tested against.

namespace gfd::kernels::detail {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double nrm2_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void csr_matvec_scalar(int n, const int* row_ptr, const int* col_idx, const double* values,
                       const double* x, double* y) {
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
        y[i] = s;
    }
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{dot_scalar, nrm2_scalar, axpy_scalar, csr_matvec_scalar};
    return table;
}

} // namespace gfd::kernels::detail
