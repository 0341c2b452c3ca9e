#include "rabidimer/basis.hpp"

#include <stdexcept>

namespace rabidimer {

Index basis_dim(const ModelParams& params) {
    params.validate();
    return 4 * static_cast<Index>(params.n_cut) * static_cast<Index>(params.n_cut);
}

Index encode(const BasisIndex& state, int n_cut) {
    if (state.n_l < 0 || state.n_l >= n_cut || state.n_r < 0 || state.n_r >= n_cut) {
        throw std::out_of_range("encode: photon occupation outside truncation");
    }
    if ((state.s_l & ~1) != 0 || (state.s_r & ~1) != 0) {
        throw std::out_of_range("encode: spin label must be 0 or 1");
    }
    Index idx = static_cast<Index>(state.n_l) * n_cut + state.n_r;
    return (idx * 2 + state.s_l) * 2 + state.s_r;
}

BasisIndex decode(Index index, int n_cut) {
    const Index dim = 4 * static_cast<Index>(n_cut) * static_cast<Index>(n_cut);
    if (index < 0 || index >= dim) {
        throw std::out_of_range("decode: flat index outside basis");
    }
    BasisIndex state;
    state.s_r = static_cast<int>(index & 1);
    index >>= 1;
    state.s_l = static_cast<int>(index & 1);
    index >>= 1;
    state.n_r = static_cast<int>(index % n_cut);
    state.n_l = static_cast<int>(index / n_cut);
    return state;
}

} // namespace rabidimer
