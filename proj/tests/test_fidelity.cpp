#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "rabidimer/fidelity.hpp"
#include "rabidimer/lanczos.hpp"
#include "rabidimer/model.hpp"

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

// Ground state of the two-level toy H(J) = sigma_z + J sigma_x in the
// {down, up} basis, normalized, closed form.
Eigen::Vector2d toy_ground(double j) {
    // H = [[-1, j], [j, 1]]; E_- = -sqrt(1+j^2).
    if (j == 0.0) return Eigen::Vector2d(1.0, 0.0);
    const double t = (std::sqrt(1.0 + j * j) - 1.0) / j;
    Eigen::Vector2d v(1.0, -t);
    v.normalize();
    return v;
}

} // namespace

TEST_CASE("fidelity basics") {
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(4);
    e0(0) = 1.0;
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(4);
    e1(1) = 1.0;
    Eigen::VectorXd mix = (e0 + e1) / std::sqrt(2.0);

    CHECK(fidelity(e0, e0) == 1.0);
    CHECK(fidelity(e0, e1) == 0.0);
    CHECK(fidelity(mix, e0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(fidelity(mix, -mix) == doctest::Approx(1.0).epsilon(1e-15));

    Eigen::VectorXd wrong = Eigen::VectorXd::Zero(5);
    CHECK_THROWS_AS(fidelity(e0, wrong), std::invalid_argument);
}

TEST_CASE("vanishing overlap is reported, not infinity") {
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(3);
    e0(0) = 1.0;
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
    e1(1) = 1.0;
    CHECK_THROWS_AS(fs_from_states(e0, e1, 1e-5), std::runtime_error);
    CHECK_THROWS_AS(fs_from_states(e0, e0, 0.0), std::invalid_argument);
}

TEST_CASE("gauge invariance of the susceptibility") {
    const Eigen::Vector2d a = toy_ground(0.0);
    const Eigen::Vector2d b = toy_ground(0.3);
    const double base = fs_from_states(a, b, 0.3);
    CHECK(fs_from_states(-a, b, 0.3) == base);
    CHECK(fs_from_states(a, -b, 0.3) == base);
    CHECK(fs_from_states(-a, -b, 0.3) == base);
    CHECK(fidelity(-a, b) == fidelity(a, b));
}

TEST_CASE("two-level toy: chi_F(0) = 1/4") {
    const double dj = 1e-5;
    const Eigen::Vector2d a = toy_ground(0.0);
    const Eigen::Vector2d b = toy_ground(dj);
    const double chi = fs_from_states(a, b, dj);
    CHECK(std::abs(chi - 0.25) <= 1e-4);
    // The overlap deficit here is ~1e-11; the complement path must keep it
    // at full relative precision.
    CHECK(fidelity(a, b) < 1.0);
    CHECK(fidelity(a, b) > 1.0 - 1e-10);
}

TEST_CASE("frozen photon sector gives chi_F = 0") {
    const ModelParams p = make_params(0.4, 5, 0.2, 1);
    const FsPoint pt = fidelity_susceptibility(p, 1e-5);
    CHECK(pt.chi_f == 0.0);
    CHECK(pt.fidelity == 1.0);
    CHECK(pt.converged);
    CHECK(pt.j == 0.2);
    CHECK(pt.delta_j == 1e-5);
    CHECK(fs_perturbative(p, 3) == 0.0);
}

TEST_CASE("finite difference matches the perturbative sum") {
    const ModelParams p = make_params(0.7, 50, 0.2, 4);
    LanczosConfig cfg;
    cfg.tol = 1e-12;
    const FsPoint fd = fidelity_susceptibility(p, 1e-5, cfg);
    REQUIRE(fd.converged);
    const double exact = fs_perturbative(p, int(4 * 4 * 4));
    CHECK(std::abs(fd.chi_f - exact) <= 0.01 * exact);
    CHECK(fd.fidelity <= 1.0 + 1e-12);
    CHECK(fd.fidelity >= 0.0);
    CHECK(fd.chi_f >= -1e-6);
}

TEST_CASE("oracle agreement across both phases") {
    // J_c(0.7) = 0.255; the grid spans normal, near-critical and
    // superradiant points of the small truncated system.
    LanczosConfig cfg;
    cfg.tol = 1e-12;
    for (double j : {0.05, 0.15, 0.26, 0.35, 0.45}) {
        const ModelParams p = make_params(0.7, 50, j, 4);
        const FsPoint fd = fidelity_susceptibility(p, 1e-5, cfg);
        REQUIRE(fd.converged);
        const double exact = fs_perturbative(p, int(4 * 4 * 4));
        CHECK(std::abs(fd.chi_f - exact) <= 0.01 * exact);
    }
}

TEST_CASE("partial sums are monotone and converge to dense") {
    const ModelParams p = make_params(0.6, 40, 0.25, 3);
    const int dim = 4 * 3 * 3;
    LanczosConfig cfg;
    cfg.tol = 1e-11;
    cfg.max_iter = 5000;
    double prev = -1.0;
    for (int k : {4, 10, 20}) {
        const double partial = fs_perturbative(p, k, cfg);
        CHECK(partial >= prev - 1e-14);
        prev = partial;
    }
    const double dense = fs_perturbative(p, dim);
    CHECK(dense >= prev - 1e-12);
    CHECK(prev == doctest::Approx(dense).epsilon(1e-3));
}

TEST_CASE("degenerate levels are excluded and reported") {
    // Frozen photons at eta below the degeneracy threshold: the whole
    // 4-state spectrum collapses within 1e-10 of the ground level.
    const ModelParams p = make_params(0.0, 1e-14, 0.1, 1);
    int excluded = -1;
    const double chi = fs_perturbative(p, 4, {}, &excluded);
    CHECK(chi == 0.0);
    CHECK(excluded == 3);

    // Clean instance: nothing excluded.
    int clean = -1;
    (void)fs_perturbative(make_params(0.7, 50, 0.2, 3), 8, {}, &clean);
    CHECK(clean == 0);
}

TEST_CASE("stencil bias: forward vs backward within 5%") {
    LanczosConfig cfg;
    cfg.tol = 1e-12;
    for (double j : {0.2, 0.26, 0.3}) {
        const ModelParams p = make_params(0.7, 50, j, 4);
        const FsPoint fwd = fidelity_susceptibility(p, 1e-5, cfg, +1);
        const FsPoint bwd = fidelity_susceptibility(p, 1e-5, cfg, -1);
        REQUIRE(fwd.converged);
        REQUIRE(bwd.converged);
        CHECK(std::abs(fwd.chi_f - bwd.chi_f) <= 0.05 * std::abs(fwd.chi_f));
    }
    CHECK_THROWS_AS(
        fidelity_susceptibility(make_params(0.7, 50, 0.0, 4), 1e-5, cfg, -1),
        std::invalid_argument);
}

TEST_CASE("step halving changes chi_F by under 1% away from the peak") {
    const ModelParams p = make_params(0.7, 50, 0.1, 4);
    LanczosConfig cfg;
    cfg.tol = 1e-12;
    const FsPoint coarse = fidelity_susceptibility(p, 1e-4, cfg);
    const FsPoint fine = fidelity_susceptibility(p, 5e-5, cfg);
    REQUIRE(coarse.converged);
    REQUIRE(fine.converged);
    CHECK(std::abs(fine.chi_f - coarse.chi_f) <= 0.01 * std::abs(coarse.chi_f));
}

TEST_CASE("solver settings are honored in the pair") {
    // Reduced-sector pair equals the full-space pair: the physical overlap
    // does not depend on how the solves were compressed.
    const ModelParams p = make_params(0.7, 80, 0.22, 6);
    LanczosConfig full;
    full.tol = 1e-12;
    LanczosConfig red = full;
    red.sector = +1;
    red.reduce = SymmetryReduction::parity_swap;
    const FsPoint a = fidelity_susceptibility(p, 1e-5, full);
    const FsPoint b = fidelity_susceptibility(p, 1e-5, red);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(std::abs(a.chi_f - b.chi_f) <= 0.01 * std::abs(a.chi_f) + 1e-10);
}
