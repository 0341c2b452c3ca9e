// lanczos.hpp — thick-restart Lanczos ground/low-state solver + dense oracle
//
// The production path computes ground states of Hamiltonians with dimensions
// up to ~1.3e5; the dense path is a test oracle guarded to dim <= 4096.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rabidimer/model.hpp"
#include "rabidimer/sparse.hpp"

namespace rabidimer {

// How a solve exploits the conserved symmetries of H.
//   none        — iterate in the full basis.
//   parity      — compress onto one Z2-parity sector (dim/2).
//   parity_swap — compress onto a joint parity + cavity-exchange sector
//                 (about dim/4; the ground doublet is swap-even).
enum class SymmetryReduction { none, parity, parity_swap };

struct LanczosConfig {
    int max_iter{500};     // cap on Krylov expansion steps (matvecs)
    double tol{1e-10};     // success: ||Hv - Ev|| <= tol * max(1, |E|)
    bool reorth{true};     // full reorthogonalization (two-pass CGS)
    std::uint64_t seed{0x5eedc0de5eedc0deULL};
    int sector{0};         // +1/-1: project the start vector onto a parity
                           // sector (exact: H never couples sectors); 0: off
    SymmetryReduction reduce{SymmetryReduction::none};
    int swap_sector{1};    // exchange eigenvalue for reduce == parity_swap
    int restart_dim{256};  // max Krylov block before a thick restart
    int keep_ritz{0};      // Ritz pairs kept across restarts; 0 = auto
    int workers{1};        // matvec threads (bitwise-deterministic)
    const Eigen::VectorXd* start{nullptr}; // optional full-basis warm start

    void validate() const;
};

struct EigenResult {
    double value{0.0};
    Eigen::VectorXd vector;  // unit norm, full basis, sign-gauged
    double residual{0.0};    // true ||Hv - Ev||
    int iterations{0};       // Krylov expansion matvecs spent
    bool converged{false};
    bool degenerate{false};  // a neighboring computed level lies within 1e-12
};

// Lowest eigenpair. On non-convergence returns the best iterate with
// converged=false rather than throwing.
EigenResult ground_state(const SparseHamiltonian& h, const LanczosConfig& cfg = {});

// Lowest k eigenpairs, ascending; pairwise orthogonal to ~1e-10.
std::vector<EigenResult> lowest_k_lanczos(const SparseHamiltonian& h, int k,
                                          const LanczosConfig& cfg = {});

// Dense-diagonalization oracle; throws if h.dim > 4096.
std::vector<EigenResult> lowest_k_dense(const SparseHamiltonian& h, int k);

// Raw-matrix entry points (no model attached; sector/reduce must be off).
std::vector<EigenResult> lowest_k_lanczos_csr(const CsrMatrix& a, int k,
                                              const LanczosConfig& cfg = {});
std::vector<EigenResult> lowest_k_dense_csr(const CsrMatrix& a, int k);

// Deterministic start vector: mt19937_64 components mapped to [-1, 1).
Eigen::VectorXd seeded_start_vector(Index dim, std::uint64_t seed);

// Sign gauge: flip v so its largest-|.| component (first such index) is >= 0.
void fix_sign_gauge(Eigen::VectorXd& v);

} // namespace rabidimer
