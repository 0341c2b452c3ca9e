// symmetry.hpp — orthonormal embeddings of symmetry-restricted subspaces
//
// The Hamiltonian conserves the Z2 parity sigma_z_L sigma_z_R (-1)^(n_L+n_R)
// (diagonal here) and the L<->R cavity exchange (a basis permutation).
// Restricting a solve to a symmetry sector shrinks the working dimension
// without changing any eigenpair that lives in that sector.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rabidimer/params.hpp"
#include "rabidimer/sparse.hpp"

namespace rabidimer {

// Isometry Q from a reduced space into the full basis. Each reduced basis
// vector is supported on one or two full-basis states (a symmetry orbit):
// weight * (|i> + sign |j>), with j = -1 for single-state orbits.
struct SubspaceMap {
    Index full_dim{0};

    struct Column {
        std::int32_t i{0};
        std::int32_t j{-1};
        double weight{1.0};
        double sign{1.0};
    };
    std::vector<Column> columns;

    Index reduced_dim() const { return static_cast<Index>(columns.size()); }

    // Q^T x (coordinates of the orthogonal projection).
    Eigen::VectorXd restrict_vector(const Eigen::VectorXd& full) const;
    // Q x.
    Eigen::VectorXd prolong(const Eigen::VectorXd& reduced) const;

    // Q^T A Q. Exact when span(Q) is invariant under A; entries leading out
    // of the subspace are dropped, so callers must pass an operator that
    // commutes with the symmetry defining the map.
    CsrMatrix reduce_matrix(const CsrMatrix& full) const;
};

// Span of basis states with the given parity eigenvalue (+1 or -1).
SubspaceMap parity_sector_map(const ModelParams& params, int sector);

// Parity sector further restricted to cavity-exchange eigenvalue swap_sector.
SubspaceMap parity_swap_sector_map(const ModelParams& params, int sector,
                                   int swap_sector);

} // namespace rabidimer
