// basis.hpp — truncated Fock ⊗ spin product basis and its flat indexing

#pragma once

#include <cstdint>

#include "rabidimer/params.hpp"

namespace rabidimer {

using Index = std::int64_t;

// One basis state |n_l, n_r, s_l, s_r>. Photon occupations run over
// 0 .. n_cut-1; spin labels are 0 for down and 1 for up in the sigma_z basis.
struct BasisIndex {
    int n_l{0};
    int n_r{0};
    int s_l{0};
    int s_r{0};
};

// Total basis size, 4 * n_cut^2.
Index basis_dim(const ModelParams& params);

// Flat index ordering: index = ((n_l*n_cut + n_r)*2 + s_l)*2 + s_r.
// The ordering is fixed so that dumps and checkpoints are reproducible.
Index encode(const BasisIndex& state, int n_cut);
BasisIndex decode(Index index, int n_cut);

// sigma_z eigenvalue of a spin label (0 -> -1, 1 -> +1).
inline int spin_z(int s) { return s == 0 ? -1 : +1; }

} // namespace rabidimer
