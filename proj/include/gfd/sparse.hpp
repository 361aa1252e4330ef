#pragma once

#include <string>
#include <vector>

namespace gfd {

struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr; // size n+1
    std::vector<int> col_idx;
    std::vector<double> values;

    int nnz() const { return static_cast<int>(col_idx.size()); }
    void matvec(const std::vector<double>& x, std::vector<double>& y) const;
};

// One operator row: the coefficients c_ij over the stencil of the center
// point. Indices are ascending and include the center.
struct OperatorRow {
    int center = -1;
    std::vector<int> indices;
    std::vector<double> coeffs;

    double diagonal() const;
    // Off-diagonals summed in ascending index order, then the diagonal.
    // Builders that derive the diagonal as minus that sum make this zero
    // exactly, not just to roundoff.
    double row_sum() const;
};

enum class OperatorKind { laplace, gradient_x, gradient_y, diffusion };

struct OperatorMatrix {
    CsrMatrix mat;
    OperatorKind kind = OperatorKind::laplace;
    int basis_degree = 0;
    bool dd_corrected = false;
    long clamp_count = 0; // positivity clamps during reconstruction

    int size() const { return mat.n; }
    OperatorRow row(int i) const;
};

OperatorMatrix assemble_rows(const std::vector<OperatorRow>& rows, OperatorKind kind,
                             int basis_degree);

// CSV triples "i,j,value" in row-major order, 17 significant digits.
void dump_operator(const OperatorMatrix& op, const std::string& path);

} // namespace gfd
