#include "rabidimer/symmetry.hpp"

#include <cmath>
#include <stdexcept>

#include "rabidimer/basis.hpp"
#include "rabidimer/model.hpp"

namespace rabidimer {

Eigen::VectorXd SubspaceMap::restrict_vector(const Eigen::VectorXd& full) const {
    if (full.size() != full_dim)
        throw std::invalid_argument("restrict_vector: dimension mismatch");
    Eigen::VectorXd out(reduced_dim());
    for (Index c = 0; c < reduced_dim(); ++c) {
        const Column& col = columns[static_cast<std::size_t>(c)];
        double v = full(col.i);
        if (col.j >= 0) v += col.sign * full(col.j);
        out(c) = col.weight * v;
    }
    return out;
}

Eigen::VectorXd SubspaceMap::prolong(const Eigen::VectorXd& reduced) const {
    if (reduced.size() != reduced_dim())
        throw std::invalid_argument("prolong: dimension mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(full_dim);
    for (Index c = 0; c < reduced_dim(); ++c) {
        const Column& col = columns[static_cast<std::size_t>(c)];
        const double v = col.weight * reduced(c);
        out(col.i) += v;
        if (col.j >= 0) out(col.j) += col.sign * v;
    }
    return out;
}

CsrMatrix SubspaceMap::reduce_matrix(const CsrMatrix& full) const {
    if (full.dim != full_dim)
        throw std::invalid_argument("reduce_matrix: dimension mismatch");

    // Inverse map: full index -> (owning column, slot within the orbit).
    std::vector<std::int32_t> owner(static_cast<std::size_t>(full_dim), -1);
    std::vector<std::int8_t> slot(static_cast<std::size_t>(full_dim), 0);
    for (Index c = 0; c < reduced_dim(); ++c) {
        const Column& col = columns[static_cast<std::size_t>(c)];
        owner[static_cast<std::size_t>(col.i)] = static_cast<std::int32_t>(c);
        slot[static_cast<std::size_t>(col.i)] = 0;
        if (col.j >= 0) {
            owner[static_cast<std::size_t>(col.j)] = static_cast<std::int32_t>(c);
            slot[static_cast<std::size_t>(col.j)] = 1;
        }
    }

    CsrBuilder builder(reduced_dim());
    for (Index c = 0; c < reduced_dim(); ++c) {
        const Column& col = columns[static_cast<std::size_t>(c)];
        for (int s = 0; s < (col.j >= 0 ? 2 : 1); ++s) {
            const Index src = (s == 0) ? col.i : col.j;
            const double f_src = (s == 0) ? 1.0 : col.sign;
            for (Index k = full.row_ptr[static_cast<std::size_t>(src)];
                 k < full.row_ptr[static_cast<std::size_t>(src) + 1]; ++k) {
                const std::int32_t tgt_full = full.col[static_cast<std::size_t>(k)];
                const std::int32_t t = owner[static_cast<std::size_t>(tgt_full)];
                if (t < 0) continue; // outside the subspace
                const Column& tcol = columns[static_cast<std::size_t>(t)];
                const double f_tgt = (slot[static_cast<std::size_t>(tgt_full)] == 0)
                                         ? 1.0
                                         : tcol.sign;
                builder.add(t, col.weight * tcol.weight * f_src * f_tgt *
                                   full.val[static_cast<std::size_t>(k)]);
            }
        }
        builder.close_row();
    }
    return builder.take();
}

namespace {

void check_sector(int sector, const char* what) {
    if (sector != 1 && sector != -1)
        throw std::invalid_argument(std::string(what) + " must be +1 or -1");
}

} // namespace

SubspaceMap parity_sector_map(const ModelParams& params, int sector) {
    params.validate();
    check_sector(sector, "parity sector");
    const Eigen::VectorXd parity = parity_vector(params);
    SubspaceMap map;
    map.full_dim = basis_dim(params);
    for (Index i = 0; i < map.full_dim; ++i) {
        if (static_cast<int>(parity(i)) == sector)
            map.columns.push_back({static_cast<std::int32_t>(i), -1, 1.0, 1.0});
    }
    return map;
}

SubspaceMap parity_swap_sector_map(const ModelParams& params, int sector,
                                   int swap_sector) {
    params.validate();
    check_sector(sector, "parity sector");
    check_sector(swap_sector, "swap sector");

    const Eigen::VectorXd parity = parity_vector(params);
    const std::vector<std::int32_t> perm = swap_permutation(params);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    SubspaceMap map;
    map.full_dim = basis_dim(params);
    for (Index i = 0; i < map.full_dim; ++i) {
        if (static_cast<int>(parity(i)) != sector) continue;
        const std::int32_t j = perm[static_cast<std::size_t>(i)];
        if (j == static_cast<std::int32_t>(i)) {
            // Swap-invariant state: lives entirely in the even sector.
            if (swap_sector == 1)
                map.columns.push_back({static_cast<std::int32_t>(i), -1, 1.0, 1.0});
        } else if (j > static_cast<std::int32_t>(i)) {
            map.columns.push_back({static_cast<std::int32_t>(i), j, inv_sqrt2,
                                   static_cast<double>(swap_sector)});
        }
    }
    return map;
}

} // namespace rabidimer
