#include "gfd/kernels.hpp"

// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma;
// it is only entered through the dispatch table after a runtime CPU check.
//
// Lane sums are reduced in a fixed order (lane 0..3, then the scalar tail),
// so results are reproducible run to run, though they differ from the
// scalar reference by reassociation roundoff.

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

#include <cmath>

namespace gfd::kernels::detail {

namespace {

inline double hsum_ordered(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return ((lane[0] + lane[1]) + lane[2]) + lane[3];
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    }
    double s = hsum_ordered(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double nrm2_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum_ordered(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void csr_matvec_avx2(int n, const int* row_ptr, const int* col_idx, const double* values,
                     const double* x, double* y) {
    for (int i = 0; i < n; ++i) {
        const int begin = row_ptr[i];
        const int end = row_ptr[i + 1];
        __m256d acc = _mm256_setzero_pd();
        int k = begin;
        for (; k + 4 <= end; k += 4) {
            __m128i cols = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col_idx + k));
            __m256d xv = _mm256_i32gather_pd(x, cols, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(values + k), xv, acc);
        }
        double s = hsum_ordered(acc);
        for (; k < end; ++k) s += values[k] * x[col_idx[k]];
        y[i] = s;
    }
}

} // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{dot_avx2, nrm2_avx2, axpy_avx2, csr_matvec_avx2};
    return table;
}

} // namespace gfd::kernels::detail

#else // non-x86: the avx2 table is never selected

namespace gfd::kernels::detail {
const KernelTable& avx2_table() { return scalar_table(); }
} // namespace gfd::kernels::detail

#endif
