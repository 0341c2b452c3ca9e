#include "rabidimer/model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace rabidimer {

namespace {

// <n'|a + a^dag|n> for n' = n +- 1, inside the truncation.
inline double ladder_amplitude(int n_from, int n_to) {
    if (n_to == n_from - 1) return std::sqrt(static_cast<double>(n_from));
    if (n_to == n_from + 1) return std::sqrt(static_cast<double>(n_from + 1));
    return 0.0;
}

} // namespace

SparseHamiltonian build_hamiltonian(const ModelParams& params) {
    params.validate();
    const int n_cut = params.n_cut;
    const Index dim = basis_dim(params);
    const double coupling = -0.5 * params.g * std::sqrt(params.eta);
    const double half_eta = 0.5 * params.eta;

    CsrBuilder builder(dim);
    for (Index row = 0; row < dim; ++row) {
        const BasisIndex s = decode(row, n_cut);

        builder.add(row, s.n_l + s.n_r + half_eta * (spin_z(s.s_l) + spin_z(s.s_r)));

        // atom-photon coupling, cavity L: (a + a^dag) sigma_x on (n_l, s_l)
        for (int nl : {s.n_l - 1, s.n_l + 1}) {
            if (nl < 0 || nl >= n_cut) continue;
            const Index c = encode({nl, s.n_r, 1 - s.s_l, s.s_r}, n_cut);
            builder.add(c, coupling * ladder_amplitude(s.n_l, nl));
        }
        // atom-photon coupling, cavity R
        for (int nr : {s.n_r - 1, s.n_r + 1}) {
            if (nr < 0 || nr >= n_cut) continue;
            const Index c = encode({s.n_l, nr, s.s_l, 1 - s.s_r}, n_cut);
            builder.add(c, coupling * ladder_amplitude(s.n_r, nr));
        }
        // inter-cavity hopping J (a_L + a_L^dag)(a_R + a_R^dag)
        if (params.j != 0.0) {
            for (int nl : {s.n_l - 1, s.n_l + 1}) {
                if (nl < 0 || nl >= n_cut) continue;
                for (int nr : {s.n_r - 1, s.n_r + 1}) {
                    if (nr < 0 || nr >= n_cut) continue;
                    const Index c = encode({nl, nr, s.s_l, s.s_r}, n_cut);
                    builder.add(c, params.j * ladder_amplitude(s.n_l, nl) *
                                       ladder_amplitude(s.n_r, nr));
                }
            }
        }
        builder.close_row();
    }
    return SparseHamiltonian{params, builder.take()};
}

CsrMatrix build_hopping_operator(const ModelParams& params) {
    params.validate();
    const int n_cut = params.n_cut;
    const Index dim = basis_dim(params);

    CsrBuilder builder(dim);
    for (Index row = 0; row < dim; ++row) {
        const BasisIndex s = decode(row, n_cut);
        for (int nl : {s.n_l - 1, s.n_l + 1}) {
            if (nl < 0 || nl >= n_cut) continue;
            for (int nr : {s.n_r - 1, s.n_r + 1}) {
                if (nr < 0 || nr >= n_cut) continue;
                const Index c = encode({nl, nr, s.s_l, s.s_r}, n_cut);
                builder.add(c, ladder_amplitude(s.n_l, nl) * ladder_amplitude(s.n_r, nr));
            }
        }
        builder.close_row();
    }
    return builder.take();
}

CsrMatrix build_quadrature_operator(const ModelParams& params, Cavity cavity) {
    params.validate();
    const int n_cut = params.n_cut;
    const Index dim = basis_dim(params);

    CsrBuilder builder(dim);
    for (Index row = 0; row < dim; ++row) {
        const BasisIndex s = decode(row, n_cut);
        const int n = cavity == Cavity::left ? s.n_l : s.n_r;
        for (int m : {n - 1, n + 1}) {
            if (m < 0 || m >= n_cut) continue;
            const BasisIndex t = cavity == Cavity::left
                                     ? BasisIndex{m, s.n_r, s.s_l, s.s_r}
                                     : BasisIndex{s.n_l, m, s.s_l, s.s_r};
            builder.add(encode(t, n_cut), ladder_amplitude(n, m));
        }
        builder.close_row();
    }
    return builder.take();
}

Eigen::VectorXd parity_vector(const ModelParams& params) {
    params.validate();
    const Index dim = basis_dim(params);
    Eigen::VectorXd parity(dim);
    for (Index i = 0; i < dim; ++i) {
        const BasisIndex s = decode(i, params.n_cut);
        const int photon_sign = ((s.n_l + s.n_r) & 1) ? -1 : +1;
        parity(i) = spin_z(s.s_l) * spin_z(s.s_r) * photon_sign;
    }
    return parity;
}

std::vector<std::int32_t> swap_permutation(const ModelParams& params) {
    params.validate();
    const Index dim = basis_dim(params);
    std::vector<std::int32_t> perm(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) {
        const BasisIndex s = decode(i, params.n_cut);
        perm[i] = static_cast<std::int32_t>(
            encode({s.n_r, s.n_l, s.s_r, s.s_l}, params.n_cut));
    }
    return perm;
}

void dump_hamiltonian(std::ostream& os, const SparseHamiltonian& h) {
    char header[160];
    std::snprintf(header, sizeof(header), "# dim=%lld g=%.17g eta=%.17g J=%.17g ncut=%d",
                  static_cast<long long>(h.dim()), h.params.g, h.params.eta,
                  h.params.j, h.params.n_cut);
    write_triplets(os, h.mat, header);
}

void dump_eigenvector(std::ostream& os, const ModelParams& params,
                      const Eigen::VectorXd& vec, double e0, double residual) {
    char header[200];
    std::snprintf(header, sizeof(header), "# %lld %.17g %.17g %.17g %d %.17g %.17g",
                  static_cast<long long>(vec.size()), params.g, params.eta,
                  params.j, params.n_cut, e0, residual);
    os << header << '\n';
    char buf[32];
    for (Index i = 0; i < vec.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", vec(i));
        os << buf << '\n';
    }
}

} // namespace rabidimer
