#include "rabidimer/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "rabidimer/basis.hpp"

namespace rabidimer {

namespace {

void check_state(const Eigen::VectorXd& state, const ModelParams& params) {
    if (state.size() != basis_dim(params))
        throw std::invalid_argument("observables: state/basis dimension mismatch");
    if (std::abs(state.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("observables: state is not unit-norm");
}

double quadrature_squared(const Eigen::VectorXd& state, const ModelParams& params,
                          double relative_sign) {
    // <X^2> = ||X psi||^2 with X = (A_L + s A_R)/(2 sqrt(eta)); X is symmetric.
    const CsrMatrix a_l = build_quadrature_operator(params, Cavity::left);
    const CsrMatrix a_r = build_quadrature_operator(params, Cavity::right);
    Eigen::VectorXd w = a_l.apply(state) + relative_sign * a_r.apply(state);
    return w.squaredNorm() / (4.0 * params.eta);
}

} // namespace

double photon_population(const Eigen::VectorXd& state, Cavity cavity,
                         const ModelParams& params) {
    params.validate();
    check_state(state, params);
    const Index dim = basis_dim(params);
    double sum = 0.0;
    for (Index i = 0; i < dim; ++i) {
        const BasisIndex b = decode(i, params.n_cut);
        const int n = cavity == Cavity::left ? b.n_l : b.n_r;
        sum += static_cast<double>(n) * state(i) * state(i);
    }
    return sum;
}

double x_minus_squared(const Eigen::VectorXd& state, const ModelParams& params) {
    params.validate();
    check_state(state, params);
    return quadrature_squared(state, params, -1.0);
}

double x_plus_squared(const Eigen::VectorXd& state, const ModelParams& params) {
    params.validate();
    check_state(state, params);
    return quadrature_squared(state, params, +1.0);
}

GsObservables observables_of_state(const ModelParams& params,
                                   const EigenResult& ground) {
    GsObservables out;
    out.params = params;
    out.e0 = ground.value;
    out.n_photon_l = photon_population(ground.vector, Cavity::left, params);
    out.n_photon_r = photon_population(ground.vector, Cavity::right, params);
    out.x2_minus = x_minus_squared(ground.vector, params);
    out.x2_plus = x_plus_squared(ground.vector, params);
    out.residual = ground.residual;
    out.iterations = ground.iterations;
    out.converged = ground.converged;
    out.truncation_pressure =
        std::max(out.n_photon_l, out.n_photon_r) > 0.5 * params.n_cut;
    return out;
}

GsObservables gs_observables(const ModelParams& params, const LanczosConfig& cfg) {
    params.validate();
    const SparseHamiltonian h = build_hamiltonian(params);
    const EigenResult ground = ground_state(h, cfg);
    return observables_of_state(params, ground);
}

} // namespace rabidimer
