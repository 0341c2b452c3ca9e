// sparse.hpp — compressed-sparse-row storage for real symmetric operators

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "rabidimer/basis.hpp"

namespace rabidimer {

// Real symmetric sparse matrix in CSR form. Both triangles are stored so the
// matrix-vector product is a plain row sweep. Column indices are sorted
// within each row and hold at most one entry per (row, col).
struct CsrMatrix {
    Index dim{0};
    std::vector<Index> row_ptr;        // size dim + 1
    std::vector<std::int32_t> col;     // size nnz
    std::vector<double> val;           // size nnz

    Index nnz() const { return static_cast<Index>(col.size()); }

    // y = A x. Row-partitioned, so the result is bitwise identical for any
    // worker count.
    void apply(const double* x, double* y, int workers = 1) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& x, int workers = 1) const;

    // Entry lookup by binary search within the row; 0 if not stored.
    double coeff(Index row, Index column) const;

    // Max column absolute sum (equals max row sum for symmetric storage).
    double norm_one() const;

    // Largest per-row entry count.
    Index max_row_nnz() const;

    // Exact entry-by-entry symmetry check of the stored pattern.
    bool is_symmetric(double tol = 0.0) const;

    Eigen::MatrixXd to_dense() const;
};

// Builds a CSR matrix row by row. add() may be called with unsorted columns;
// duplicate columns within a row are summed.
class CsrBuilder {
public:
    explicit CsrBuilder(Index dim);

    // Appends one entry to the current row. Rows must be closed in order.
    void add(Index column, double value);
    void close_row();

    CsrMatrix take();

private:
    Index dim_;
    Index current_row_{0};
    std::vector<std::pair<std::int32_t, double>> row_entries_;
    CsrMatrix out_;
};

// Triplet text dump: one `row col value` line per stored entry, preceded by
// `header` as a comment line when non-empty. Values use 17 significant digits.
void write_triplets(std::ostream& os, const CsrMatrix& m, const std::string& header);

} // namespace rabidimer
