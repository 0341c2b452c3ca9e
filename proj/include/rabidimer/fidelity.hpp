// fidelity.hpp — ground-state fidelity, finite-difference fidelity
// susceptibility, and the perturbative-sum oracle.

#pragma once

#include <Eigen/Dense>

#include "rabidimer/lanczos.hpp"
#include "rabidimer/params.hpp"

namespace rabidimer {

struct FsPoint {
    double j{0.0};        // hopping value the susceptibility refers to
    double chi_f{0.0};    // -2 ln F / delta_j^2
    double delta_j{0.0};  // step magnitude used
    double fidelity{1.0}; // raw overlap |<psi(J)|psi(J+dJ)>|
    bool converged{true}; // both underlying solves met the residual contract
};

// |<a|b>| — absolute value makes it sign-gauge invariant.
double fidelity(const Eigen::VectorXd& psi_a, const Eigen::VectorXd& psi_b);

// chi_F from two unit ground states. For overlaps near 1 the log runs through
// the complement 1 - F = ||a - s b||^2 / 2 (s aligns signs), which keeps the
// tiny deficit at full relative precision.
double fs_from_states(const Eigen::VectorXd& psi_a, const Eigen::VectorXd& psi_b,
                      double delta_j);

// Finite-difference chi_F at params.j. Both solves share the seed and
// symmetry settings of cfg; the second solve warm-starts from the first
// ground state. direction: +1 pairs (J, J+dJ), -1 pairs (J, J-dJ)
// (validation mode for the stencil-bias check).
FsPoint fidelity_susceptibility(const ModelParams& params, double delta_j,
                                const LanczosConfig& cfg = {}, int direction = +1);

// Second-order perturbation sum chi_F = sum_{n>0} |<n|H1|0>|^2/(E_n-E_0)^2
// over the k_states lowest excited states (small-instance oracle; uses the
// dense solver when the full spectrum is required and fits the guard).
// States with E_n - E_0 < 1e-10 are excluded; their count is reported
// through excluded_degenerate when non-null.
double fs_perturbative(const ModelParams& params, int k_states,
                       const LanczosConfig& cfg = {},
                       int* excluded_degenerate = nullptr);

} // namespace rabidimer
