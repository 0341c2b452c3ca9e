#include "rabidimer/fidelity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rabidimer/model.hpp"

namespace rabidimer {

double fidelity(const Eigen::VectorXd& psi_a, const Eigen::VectorXd& psi_b) {
    if (psi_a.size() != psi_b.size())
        throw std::invalid_argument("fidelity: dimension mismatch");
    return std::abs(psi_a.dot(psi_b));
}

double fs_from_states(const Eigen::VectorXd& psi_a, const Eigen::VectorXd& psi_b,
                      double delta_j) {
    if (!(delta_j > 0.0))
        throw std::invalid_argument("fs_from_states: delta_j must be > 0");
    if (psi_a.size() != psi_b.size())
        throw std::invalid_argument("fs_from_states: dimension mismatch");
    const double dot = psi_a.dot(psi_b);
    const double f = std::abs(dot);
    if (f < 1e-12)
        throw std::runtime_error(
            "fs_from_states: vanishing overlap (sector mismatch or level crossing)");
    double log_f;
    if (f > 1.0 - 1e-4) {
        // s <a|b> = 1 - d^2/2 exactly for unit vectors; log1p keeps the
        // near-unity overlap at full relative precision.
        const double s = dot >= 0.0 ? 1.0 : -1.0;
        const double d2 = (psi_a - s * psi_b).squaredNorm();
        log_f = std::log1p(-0.5 * d2);
    } else {
        log_f = std::log(f);
    }
    return -2.0 * log_f / (delta_j * delta_j);
}

FsPoint fidelity_susceptibility(const ModelParams& params, double delta_j,
                                const LanczosConfig& cfg, int direction) {
    params.validate();
    cfg.validate();
    if (!(delta_j > 0.0))
        throw std::invalid_argument("fidelity_susceptibility: delta_j must be > 0");
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("fidelity_susceptibility: direction must be +1 or -1");

    ModelParams shifted = params;
    shifted.j = params.j + direction * delta_j;
    if (shifted.j < 0.0 && params.j >= 0.0 && direction == -1)
        throw std::invalid_argument("fidelity_susceptibility: J - delta_j is negative");
    shifted.validate();

    const SparseHamiltonian h_a = build_hamiltonian(params);
    const EigenResult a = ground_state(h_a, cfg);

    LanczosConfig cfg_b = cfg;
    cfg_b.start = &a.vector; // ties the pair to the same physical branch
    const SparseHamiltonian h_b = build_hamiltonian(shifted);
    const EigenResult b = ground_state(h_b, cfg_b);

    FsPoint out;
    out.j = params.j;
    out.delta_j = delta_j;
    out.fidelity = fidelity(a.vector, b.vector);
    out.chi_f = fs_from_states(a.vector, b.vector, delta_j);
    out.converged = a.converged && b.converged;
    return out;
}

double fs_perturbative(const ModelParams& params, int k_states,
                       const LanczosConfig& cfg, int* excluded_degenerate) {
    params.validate();
    if (k_states < 1)
        throw std::invalid_argument("fs_perturbative: k_states must be >= 1");

    const SparseHamiltonian h = build_hamiltonian(params);
    const Index dim = h.dim();
    const int want = static_cast<int>(
        std::min<Index>(static_cast<Index>(k_states) + 1, dim));

    std::vector<EigenResult> states;
    if (dim <= 4096 && want == dim) {
        states = lowest_k_dense(h, want);
    } else {
        LanczosConfig inner = cfg;
        if (inner.max_iter < 40 * want) inner.max_iter = 40 * want;
        states = lowest_k_lanczos(h, want, inner);
        for (const auto& s : states) {
            if (!s.converged) {
                std::ostringstream msg;
                msg << "fs_perturbative: excited-state solve not converged"
                    << " (residual " << s.residual << ")";
                throw std::runtime_error(msg.str());
            }
        }
    }

    const CsrMatrix h1 = build_hopping_operator(params);
    const Eigen::VectorXd w = h1.apply(states.front().vector);
    const double e0 = states.front().value;
    double sum = 0.0;
    int excluded = 0;
    for (std::size_t n = 1; n < states.size(); ++n) {
        const double gap = states[n].value - e0;
        if (gap < 1e-10) {
            ++excluded;
            continue;
        }
        const double m = states[n].vector.dot(w);
        sum += (m * m) / (gap * gap);
    }
    if (excluded_degenerate) *excluded_degenerate = excluded;
    return sum;
}

} // namespace rabidimer
