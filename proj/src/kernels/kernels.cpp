#include "gfd/kernels.hpp"

#include "gfd/errors.hpp"

namespace gfd::kernels {

namespace {

Isa detect_best() {
#if defined(__x86_64__) || defined(__i386__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
    return Isa::scalar;
}

const detail::KernelTable* g_table = nullptr;
Isa g_isa = Isa::scalar;

const detail::KernelTable& table() {
    if (!g_table) set_isa(best_supported_isa());
    return *g_table;
}

} // namespace

Isa best_supported_isa() {
    static const Isa best = detect_best();
    return best;
}

Isa active_isa() {
    table();
    return g_isa;
}

void set_isa(Isa isa) {
    if (isa == Isa::avx2 && best_supported_isa() != Isa::avx2)
        throw parameter_error("kernels: avx2 requested but not supported by this CPU");
    g_isa = isa;
    g_table = (isa == Isa::avx2) ? &detail::avx2_table() : &detail::scalar_table();
}

std::string isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> x, std::span<const double> y) {
    return table().dot(x.data(), y.data(), x.size());
}

double nrm2(std::span<const double> x) { return table().nrm2(x.data(), x.size()); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
    table().axpy(a, x.data(), y.data(), x.size());
}

void csr_matvec(int n, const int* row_ptr, const int* col_idx, const double* values,
                const double* x, double* y) {
    table().csr_matvec(n, row_ptr, col_idx, values, x, y);
}

} // namespace gfd::kernels
