#include "rabidimer/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "rabidimer/parallel.hpp"

namespace rabidimer {

void CsrMatrix::apply(const double* x, double* y, int workers) const {
    auto rows = [&](Index r) {
        double acc = 0.0;
        for (Index k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            acc += val[k] * x[col[k]];
        }
        y[r] = acc;
    };
    // Threading only pays off for large rows; the cutoff keeps small solves
    // free of thread overhead.
    if (workers > 1 && dim >= 1 << 15) {
        const Index chunk = 4096;
        const Index nchunks = (dim + chunk - 1) / chunk;
        parallel_for(nchunks, workers, [&](Index c) {
            const Index hi = std::min(dim, (c + 1) * chunk);
            for (Index r = c * chunk; r < hi; ++r) rows(r);
        });
    } else {
        for (Index r = 0; r < dim; ++r) rows(r);
    }
}

Eigen::VectorXd CsrMatrix::apply(const Eigen::VectorXd& x, int workers) const {
    if (x.size() != dim) {
        throw std::invalid_argument("CsrMatrix::apply: dimension mismatch");
    }
    Eigen::VectorXd y(dim);
    apply(x.data(), y.data(), workers);
    return y;
}

double CsrMatrix::coeff(Index row, Index column) const {
    const auto begin = col.begin() + row_ptr[row];
    const auto end = col.begin() + row_ptr[row + 1];
    const auto it = std::lower_bound(begin, end, static_cast<std::int32_t>(column));
    if (it == end || *it != column) return 0.0;
    return val[static_cast<std::size_t>(it - col.begin())];
}

double CsrMatrix::norm_one() const {
    std::vector<double> colsum(static_cast<std::size_t>(dim), 0.0);
    for (Index r = 0; r < dim; ++r) {
        for (Index k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            colsum[col[k]] += std::abs(val[k]);
        }
    }
    double m = 0.0;
    for (double s : colsum) m = std::max(m, s);
    return m;
}

Index CsrMatrix::max_row_nnz() const {
    Index m = 0;
    for (Index r = 0; r < dim; ++r) {
        m = std::max(m, row_ptr[r + 1] - row_ptr[r]);
    }
    return m;
}

bool CsrMatrix::is_symmetric(double tol) const {
    for (Index r = 0; r < dim; ++r) {
        for (Index k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            const double mirror = coeff(col[k], r);
            if (std::abs(mirror - val[k]) > tol) return false;
        }
    }
    return true;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (Index r = 0; r < dim; ++r) {
        for (Index k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            m(r, col[k]) = val[k];
        }
    }
    return m;
}

CsrBuilder::CsrBuilder(Index dim) : dim_(dim) {
    if (dim < 0) throw std::invalid_argument("CsrBuilder: negative dimension");
    out_.dim = dim;
    out_.row_ptr.reserve(static_cast<std::size_t>(dim) + 1);
    out_.row_ptr.push_back(0);
}

void CsrBuilder::add(Index column, double value) {
    if (column < 0 || column >= dim_) {
        throw std::out_of_range("CsrBuilder::add: column outside matrix");
    }
    if (!std::isfinite(value)) {
        throw std::invalid_argument("CsrBuilder::add: non-finite value");
    }
    row_entries_.emplace_back(static_cast<std::int32_t>(column), value);
}

void CsrBuilder::close_row() {
    if (current_row_ >= dim_) {
        throw std::logic_error("CsrBuilder::close_row: all rows already closed");
    }
    std::sort(row_entries_.begin(), row_entries_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < row_entries_.size(); ++i) {
        if (i > 0 && row_entries_[i].first == out_.col.back()) {
            out_.val.back() += row_entries_[i].second;
        } else {
            out_.col.push_back(row_entries_[i].first);
            out_.val.push_back(row_entries_[i].second);
        }
    }
    out_.row_ptr.push_back(static_cast<Index>(out_.col.size()));
    row_entries_.clear();
    ++current_row_;
}

CsrMatrix CsrBuilder::take() {
    if (current_row_ != dim_) {
        throw std::logic_error("CsrBuilder::take: not all rows closed");
    }
    return std::move(out_);
}

void write_triplets(std::ostream& os, const CsrMatrix& m, const std::string& header) {
    if (!header.empty()) os << header << '\n';
    char buf[64];
    for (Index r = 0; r < m.dim; ++r) {
        for (Index k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", m.val[k]);
            os << r << ' ' << m.col[k] << ' ' << buf << '\n';
        }
    }
}

} // namespace rabidimer
