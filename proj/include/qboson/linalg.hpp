#pragma once

#include <utility>
#include <vector>

#include "qboson/scalar.hpp"

namespace qboson {

using Row = std::vector<Scalar>;
using Matrix = std::vector<Row>; // row-major

inline Matrix matrix_zero(size_t rows, size_t cols) {
    return Matrix(rows, Row(cols, Scalar(0)));
}

/// y += M x
inline void matrix_apply(const Matrix& m, const Row& x, Row& y) {
    for (size_t r = 0; r < m.size(); ++r)
        for (size_t c = 0; c < m[r].size(); ++c)
            if (!m[r][c].is_zero() && !x[c].is_zero()) y[r] += m[r][c] * x[c];
}

struct Echelon {
    Matrix rows;                 // reduced row echelon form, zero rows dropped
    std::vector<int> pivot_cols; // ascending
    int rank = 0;
};

/// Reduced row echelon form over the exact Scalar field. Deterministic:
/// columns are scanned left to right, the first row with a nonzero entry is
/// the pivot. No magnitude heuristics exist for exact arithmetic, so row
/// order alone breaks ties.
inline Echelon rref(Matrix m) {
    Echelon e;
    if (m.empty()) return e;
    size_t cols = m[0].size();
    size_t fixed = 0;
    for (size_t col = 0; col < cols && fixed < m.size(); ++col) {
        size_t piv = fixed;
        while (piv < m.size() && m[piv][col].is_zero()) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[fixed]);
        Scalar inv = m[fixed][col].inverse();
        for (size_t c = col; c < cols; ++c)
            if (!m[fixed][c].is_zero()) m[fixed][c] *= inv;
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == fixed || m[r][col].is_zero()) continue;
            Scalar f = m[r][col];
            for (size_t c = col; c < cols; ++c)
                if (!m[fixed][c].is_zero()) m[r][c] -= f * m[fixed][c];
        }
        e.pivot_cols.push_back(static_cast<int>(col));
        ++fixed;
    }
    e.rank = static_cast<int>(fixed);
    m.resize(fixed);
    e.rows = std::move(m);
    return e;
}

inline int rank_of(Matrix m) { return rref(std::move(m)).rank; }

/// Basis of the right kernel {x : M x = 0}, one vector per non-pivot column.
inline std::vector<Row> kernel_basis(const Echelon& e, size_t cols) {
    std::vector<bool> is_pivot(cols, false);
    for (int c : e.pivot_cols) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<Row> out;
    for (size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        Row v(cols, Scalar(0));
        v[free_col] = Scalar(1);
        for (size_t r = 0; r < e.rows.size(); ++r) {
            size_t pc = static_cast<size_t>(e.pivot_cols[r]);
            v[pc] = -e.rows[r][free_col];
        }
        out.push_back(std::move(v));
    }
    return out;
}

struct SolveResult {
    bool consistent = false;
    Row particular;           // one solution (free coordinates set to 0)
    std::vector<Row> kernel;  // basis of the homogeneous solutions
    int bad_row = -1;         // an original row index witnessing inconsistency
};

/// Solve A x = b exactly. On inconsistency, bad_row names an input row that
/// participates in a 0 = nonzero reduction (the first one found).
inline SolveResult solve(Matrix a, Row b) {
    SolveResult res;
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    std::vector<int> origin(rows);
    for (size_t r = 0; r < rows; ++r) origin[r] = static_cast<int>(r);

    size_t fixed = 0;
    std::vector<int> pivot_cols;
    for (size_t col = 0; col < cols && fixed < rows; ++col) {
        size_t piv = fixed;
        while (piv < rows && a[piv][col].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[fixed]);
        std::swap(b[piv], b[fixed]);
        std::swap(origin[piv], origin[fixed]);
        Scalar inv = a[fixed][col].inverse();
        for (size_t c = col; c < cols; ++c)
            if (!a[fixed][c].is_zero()) a[fixed][c] *= inv;
        b[fixed] *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == fixed || a[r][col].is_zero()) continue;
            Scalar f = a[r][col];
            for (size_t c = col; c < cols; ++c)
                if (!a[fixed][c].is_zero()) a[r][c] -= f * a[fixed][c];
            b[r] -= f * b[fixed];
        }
        pivot_cols.push_back(static_cast<int>(col));
        ++fixed;
    }
    for (size_t r = fixed; r < rows; ++r) {
        if (!b[r].is_zero()) {
            res.bad_row = origin[r];
            return res;
        }
    }
    res.consistent = true;
    res.particular.assign(cols, Scalar(0));
    for (size_t r = 0; r < fixed; ++r)
        res.particular[static_cast<size_t>(pivot_cols[r])] = b[r];
    Echelon e;
    a.resize(fixed);
    e.rows = std::move(a);
    e.pivot_cols = pivot_cols;
    e.rank = static_cast<int>(fixed);
    res.kernel = kernel_basis(e, cols);
    return res;
}

} // namespace qboson
