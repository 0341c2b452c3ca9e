// observables.hpp — ground-state diagnostics: energy, photon populations,
// squared normal-mode quadratures.

#pragma once

#include <Eigen/Dense>

#include "rabidimer/lanczos.hpp"
#include "rabidimer/model.hpp"
#include "rabidimer/params.hpp"

namespace rabidimer {

struct GsObservables {
    ModelParams params;
    double e0{0.0};          // ground energy, units of omega
    double n_photon_l{0.0};  // <a_L^dag a_L>
    double n_photon_r{0.0};  // <a_R^dag a_R>
    double x2_minus{0.0};    // <x_-^2>, x_- = (x_L - x_R)/sqrt(2)
    double x2_plus{0.0};     // <x_+^2> (mirror diagnostic, not plotted upstream)
    double residual{0.0};
    int iterations{0};
    bool converged{false};
    // Ground state pressing against the Fock truncation: population above
    // n_cut/2 invalidates the point.
    bool truncation_pressure{false};
};

// <n_i> of a unit-norm state; exact diagonal expectation.
double photon_population(const Eigen::VectorXd& state, Cavity cavity,
                         const ModelParams& params);

// <x_-^2> evaluated as ||(A_L - A_R) psi||^2 / (4 eta), A_i = a_i + a_i^dag.
double x_minus_squared(const Eigen::VectorXd& state, const ModelParams& params);

// Symmetric-mode mirror of x_minus_squared.
double x_plus_squared(const Eigen::VectorXd& state, const ModelParams& params);

// Evaluates the full bundle from an existing ground-state solve.
GsObservables observables_of_state(const ModelParams& params,
                                   const EigenResult& ground);

// Solves the ground state, then evaluates the bundle.
GsObservables gs_observables(const ModelParams& params,
                             const LanczosConfig& cfg = {});

} // namespace rabidimer
