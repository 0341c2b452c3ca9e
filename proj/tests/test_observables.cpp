#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "rabidimer/basis.hpp"
#include "rabidimer/lanczos.hpp"
#include "rabidimer/model.hpp"
#include "rabidimer/observables.hpp"

#include "dense_reference.hpp"

using namespace rabidimer;

namespace {

ModelParams make_params(double g, double eta, double j, int n_cut) {
    ModelParams p;
    p.g = g;
    p.eta = eta;
    p.j = j;
    p.n_cut = n_cut;
    return p;
}

Eigen::VectorXd unit_basis_state(const ModelParams& p, const BasisIndex& s) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(basis_dim(p));
    v(encode(s, p.n_cut)) = 1.0;
    return v;
}

Eigen::VectorXd random_unit(Index dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = u(rng);
    v.normalize();
    return v;
}

} // namespace

TEST_CASE("vacuum populations vanish") {
    const ModelParams p = make_params(0.5, 100, 0.2, 4);
    const Eigen::VectorXd vac = unit_basis_state(p, BasisIndex{});
    CHECK(photon_population(vac, Cavity::left, p) == 0.0);
    CHECK(photon_population(vac, Cavity::right, p) == 0.0);
}

TEST_CASE("basis state populations (3, 1)") {
    const ModelParams p = make_params(0.5, 100, 0.2, 5);
    BasisIndex s;
    s.n_l = 3;
    s.n_r = 1;
    s.s_l = 1;
    const Eigen::VectorXd v = unit_basis_state(p, s);
    CHECK(photon_population(v, Cavity::left, p) == 3.0);
    CHECK(photon_population(v, Cavity::right, p) == 1.0);
}

TEST_CASE("input validation") {
    const ModelParams p = make_params(0.5, 100, 0.2, 3);
    Eigen::VectorXd wrong = Eigen::VectorXd::Zero(basis_dim(p) + 2);
    wrong(0) = 1.0;
    CHECK_THROWS_AS(photon_population(wrong, Cavity::left, p),
                    std::invalid_argument);
    Eigen::VectorXd unnormalized = Eigen::VectorXd::Zero(basis_dim(p));
    unnormalized(0) = 0.9;
    CHECK_THROWS_AS(photon_population(unnormalized, Cavity::left, p),
                    std::invalid_argument);
    CHECK_THROWS_AS(x_minus_squared(unnormalized, p), std::invalid_argument);
}

TEST_CASE("vacuum quadrature 1/(2 eta)") {
    for (double eta : {10.0, 1000.0}) {
        const ModelParams p = make_params(0.3, eta, 0.1, 3);
        const Eigen::VectorXd vac = unit_basis_state(p, BasisIndex{});
        CHECK(x_minus_squared(vac, p) ==
              doctest::Approx(1.0 / (2.0 * eta)).epsilon(1e-14));
        CHECK(x_plus_squared(vac, p) ==
              doctest::Approx(1.0 / (2.0 * eta)).epsilon(1e-14));
    }
    // eta = 1000 arithmetic spelled out.
    const ModelParams p = make_params(0.0, 1000, 0.0, 3);
    const Eigen::VectorXd vac = unit_basis_state(p, BasisIndex{});
    CHECK(x_minus_squared(vac, p) == doctest::Approx(5.0e-4).epsilon(1e-14));
}

TEST_CASE("dense brute-force equivalence on random states") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ug(0.0, 0.9);
    for (int draw = 0; draw < 6; ++draw) {
        const int n_cut = 2 + int(rng() % 3);
        const ModelParams p = make_params(ug(rng), 20 + 30 * ug(rng), 0.3 * ug(rng), n_cut);
        const Eigen::VectorXd v = random_unit(basis_dim(p), 100 + draw);
        const double nl = photon_population(v, Cavity::left, p);
        const double nr = photon_population(v, Cavity::right, p);
        CHECK(std::abs(nl - testsupport::dense_population(v, p, true)) <= 1e-10);
        CHECK(std::abs(nr - testsupport::dense_population(v, p, false)) <= 1e-10);
        CHECK(std::abs(x_minus_squared(v, p) - testsupport::dense_x2_minus(v, p)) <= 1e-10);
    }
}

TEST_CASE("dense equivalence on a small ground state") {
    const ModelParams p = make_params(0.7, 50, 0.2, 4);
    const auto h = build_hamiltonian(p);
    const auto gs = lowest_k_dense(h, 1)[0];
    const GsObservables obs = observables_of_state(p, gs);
    CHECK(std::abs(obs.n_photon_l - testsupport::dense_population(gs.vector, p, true)) <= 1e-10);
    CHECK(std::abs(obs.n_photon_r - testsupport::dense_population(gs.vector, p, false)) <= 1e-10);
    CHECK(std::abs(obs.x2_minus - testsupport::dense_x2_minus(gs.vector, p)) <= 1e-10);
    CHECK(obs.e0 == gs.value);
}

TEST_CASE("decoupled point: exact bundle") {
    const ModelParams p = make_params(0, 1200, 0, 20);
    LanczosConfig cfg;
    cfg.tol = 1e-12;
    const GsObservables obs = gs_observables(p, cfg);
    CHECK(obs.converged);
    CHECK(std::abs(obs.e0 + 1200.0) <= 1e-8);
    CHECK(obs.n_photon_l <= 1e-12);
    CHECK(obs.n_photon_r <= 1e-12);
    CHECK(obs.x2_minus == doctest::Approx(1.0 / 2400.0).epsilon(1e-8));
    CHECK_FALSE(obs.truncation_pressure);
}

TEST_CASE("normal phase: E0 near -eta, tiny populations") {
    const ModelParams p = make_params(0.7, 400, 0.1, 24);
    LanczosConfig cfg;
    cfg.reduce = SymmetryReduction::parity_swap;
    cfg.sector = +1;
    const GsObservables obs = gs_observables(p, cfg);
    REQUIRE(obs.converged);
    CHECK(std::abs(obs.e0 + p.eta) <= 0.5);
    CHECK(obs.n_photon_l <= 0.1);
    CHECK(obs.n_photon_r <= 0.1);
    CHECK(obs.x2_minus <= 3.0 / (2.0 * p.eta));
}

TEST_CASE("superradiant drop and order parameter growth") {
    LanczosConfig cfg;
    cfg.reduce = SymmetryReduction::parity_swap;
    cfg.sector = +1;
    cfg.max_iter = 5000;
    // g=0.8, eta=150: J_c = 0.18; past it the photon populations and <x_-^2>
    // take off while E0 dives.
    const GsObservables below = gs_observables(make_params(0.8, 150, 0.10, 50), cfg);
    const GsObservables above = gs_observables(make_params(0.8, 150, 0.30, 50), cfg);
    REQUIRE(below.converged);
    REQUIRE(above.converged);
    CHECK(below.n_photon_l <= 0.2);
    CHECK(above.n_photon_l > 1.0);
    CHECK(above.x2_minus > 10.0 * below.x2_minus);
    CHECK(above.e0 < below.e0 - 1.0);
}

TEST_CASE("swap symmetry of populations") {
    LanczosConfig cfg;
    cfg.reduce = SymmetryReduction::parity_swap;
    cfg.sector = +1;
    const GsObservables obs = gs_observables(make_params(0.7, 200, 0.22, 30), cfg);
    REQUIRE(obs.converged);
    CHECK(std::abs(obs.n_photon_l - obs.n_photon_r) <=
          1e-8 * (1.0 + obs.n_photon_l));
}

TEST_CASE("positivity") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int draw = 0; draw < 4; ++draw) {
        const ModelParams p = make_params(u(rng), 10 + 40 * u(rng), 0.4 * u(rng), 3);
        const Eigen::VectorXd v = random_unit(basis_dim(p), 200 + draw);
        CHECK(photon_population(v, Cavity::left, p) >= -1e-12);
        CHECK(photon_population(v, Cavity::right, p) >= -1e-12);
        CHECK(x_minus_squared(v, p) >= -1e-12);
        CHECK(x_plus_squared(v, p) >= -1e-12);
    }
}

TEST_CASE("truncation pressure flag") {
    const ModelParams p = make_params(0.5, 50, 0.1, 6);
    BasisIndex edge;
    edge.n_l = 5; // population 5 > 0.5 * n_cut = 3
    EigenResult fake;
    fake.vector = unit_basis_state(p, edge);
    fake.value = -1.0;
    fake.converged = true;
    const GsObservables obs = observables_of_state(p, fake);
    CHECK(obs.truncation_pressure);

    EigenResult vac;
    vac.vector = unit_basis_state(p, BasisIndex{});
    vac.value = -1.0;
    vac.converged = true;
    CHECK_FALSE(observables_of_state(p, vac).truncation_pressure);
}
