// params.hpp — dimensionless parameters of the two-cavity Rabi system

#pragma once

#include <stdexcept>
#include <string>

namespace rabidimer {

// All energies produced by the toolkit are measured in units of the cavity
// frequency. `g` is the dimensionless atom-photon coupling, `eta` the
// atom/cavity frequency ratio, `j` the inter-cavity hopping strength and
// `n_cut` the number of Fock states kept per cavity (occupations
// 0 .. n_cut-1, hard truncation).
struct ModelParams {
    double g{0.0};
    double eta{1.0};
    double j{0.0};
    int n_cut{2};

    void validate() const {
        if (!(g >= 0.0)) {
            throw std::invalid_argument("ModelParams: g must be >= 0");
        }
        if (!(eta > 0.0)) {
            throw std::invalid_argument("ModelParams: eta must be > 0");
        }
        if (!(j >= 0.0)) {
            throw std::invalid_argument("ModelParams: j must be >= 0");
        }
        // n_cut = 1 freezes the photon sector to the vacuum; useful for
        // spin-only limits and tests, so it is allowed here.
        if (n_cut < 1) {
            throw std::invalid_argument("ModelParams: n_cut must be >= 1");
        }
    }
};

} // namespace rabidimer
