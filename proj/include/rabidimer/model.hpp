// model.hpp — assembly of the two-cavity Rabi Hamiltonian over the truncated basis
//
// H(J)/omega = H0 + J*H1 with
//   H0 = sum_{i=L,R} a_i^dag a_i + (eta/2) sigma_z_i
//        - (g sqrt(eta)/2) (a_i + a_i^dag) sigma_x_i
//   H1 = (a_L + a_L^dag)(a_R + a_R^dag)
// Creation amplitudes that would leave the truncated Fock space are dropped.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rabidimer/params.hpp"
#include "rabidimer/sparse.hpp"

namespace rabidimer {

enum class Cavity { left, right };

// Assembled Hamiltonian together with the parameters it was built from.
struct SparseHamiltonian {
    ModelParams params;
    CsrMatrix mat;

    Index dim() const { return mat.dim; }
    Eigen::VectorXd apply(const Eigen::VectorXd& v, int workers = 1) const {
        return mat.apply(v, workers);
    }
};

SparseHamiltonian build_hamiltonian(const ModelParams& params);

// The hopping operator H1 alone (independent of params.j). This is also
// dH/dJ in units of the cavity frequency.
CsrMatrix build_hopping_operator(const ModelParams& params);

// (a + a^dag) for one cavity, truncated.
CsrMatrix build_quadrature_operator(const ModelParams& params, Cavity cavity);

// Z2 parity sigma_z_L sigma_z_R (-1)^(n_L + n_R), diagonal in this basis.
// Returned as a vector of +-1 over the flat index.
Eigen::VectorXd parity_vector(const ModelParams& params);

// Basis relabeling that exchanges the two cavities: (n_l,n_r,s_l,s_r) ->
// (n_r,n_l,s_r,s_l). An involution; H commutes with it for equal cavities.
std::vector<std::int32_t> swap_permutation(const ModelParams& params);

// Debug dump in triplet form with the documented one-line header.
void dump_hamiltonian(std::ostream& os, const SparseHamiltonian& h);

// Eigenvector dump: `# dim g eta J ncut E0 residual` header then one
// component per line.
void dump_eigenvector(std::ostream& os, const ModelParams& params,
                      const Eigen::VectorXd& vec, double e0, double residual);

} // namespace rabidimer
