#include "gfd/sparse.hpp"

#include <cstdio>
#include <fstream>

#include "gfd/errors.hpp"
#include "gfd/kernels.hpp"

namespace gfd {

void CsrMatrix::matvec(const std::vector<double>& x, std::vector<double>& y) const {
    y.resize(n);
    kernels::csr_matvec(n, row_ptr.data(), col_idx.data(), values.data(), x.data(), y.data());
}

double OperatorRow::diagonal() const {
    for (std::size_t k = 0; k < indices.size(); ++k)
        if (indices[k] == center) return coeffs[k];
    return 0.0;
}

double OperatorRow::row_sum() const {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] == center)
            diag = coeffs[k];
        else
            off += coeffs[k];
    }
    return off + diag;
}

OperatorRow OperatorMatrix::row(int i) const {
    OperatorRow r;
    r.center = i;
    for (int k = mat.row_ptr[i]; k < mat.row_ptr[i + 1]; ++k) {
        r.indices.push_back(mat.col_idx[k]);
        r.coeffs.push_back(mat.values[k]);
    }
    return r;
}

OperatorMatrix assemble_rows(const std::vector<OperatorRow>& rows, OperatorKind kind,
                             int basis_degree) {
    OperatorMatrix op;
    op.kind = kind;
    op.basis_degree = basis_degree;
    op.mat.n = static_cast<int>(rows.size());
    op.mat.row_ptr.assign(op.mat.n + 1, 0);
    for (int i = 0; i < op.mat.n; ++i) {
        if (rows[i].center != i)
            throw parameter_error("assemble_rows: rows must be given in center order");
        op.mat.row_ptr[i + 1] = op.mat.row_ptr[i] + static_cast<int>(rows[i].indices.size());
    }
    op.mat.col_idx.reserve(op.mat.row_ptr.back());
    op.mat.values.reserve(op.mat.row_ptr.back());
    for (const OperatorRow& r : rows) {
        op.mat.col_idx.insert(op.mat.col_idx.end(), r.indices.begin(), r.indices.end());
        op.mat.values.insert(op.mat.values.end(), r.coeffs.begin(), r.coeffs.end());
    }
    return op;
}

void dump_operator(const OperatorMatrix& op, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw format_error("dump_operator: cannot open '" + path + "'");
    out << "i,j,value\n";
    char buf[96];
    for (int i = 0; i < op.mat.n; ++i) {
        for (int k = op.mat.row_ptr[i]; k < op.mat.row_ptr[i + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", i, op.mat.col_idx[k],
                          op.mat.values[k]);
            out << buf;
        }
    }
}

} // namespace gfd
