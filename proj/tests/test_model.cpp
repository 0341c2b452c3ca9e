#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "rabidimer/basis.hpp"
#include "rabidimer/lanczos.hpp"
#include "rabidimer/model.hpp"
#include "rabidimer/params.hpp"

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

Eigen::VectorXd random_vector(Index dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = u(rng);
    return v;
}

} // namespace

TEST_CASE("params validation") {
    CHECK_NOTHROW(make_params(0.7, 1500, 0.2, 80).validate());
    CHECK_NOTHROW(make_params(0.0, 1.0, 0.0, 1).validate());
    CHECK_THROWS_AS(make_params(-0.1, 1, 0, 2).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_params(0.5, 0.0, 0, 2).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_params(0.5, -3, 0, 2).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_params(0.5, 1, -0.2, 2).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_params(0.5, 1, 0, 0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(build_hamiltonian(make_params(0.5, 1, 0, -2)),
                    std::invalid_argument);
}

TEST_CASE("basis flat index round trip") {
    const int n_cut = 3;
    const ModelParams p = make_params(0.1, 10, 0.1, n_cut);
    CHECK(basis_dim(p) == 4 * n_cut * n_cut);
    for (Index i = 0; i < basis_dim(p); ++i) {
        const BasisIndex s = decode(i, n_cut);
        CHECK(s.n_l >= 0);
        CHECK(s.n_l < n_cut);
        CHECK(s.n_r >= 0);
        CHECK(s.n_r < n_cut);
        CHECK((s.s_l == 0 || s.s_l == 1));
        CHECK((s.s_r == 0 || s.s_r == 1));
        CHECK(encode(s, n_cut) == i);
    }
    // Documented ordering: index = ((n_l*n_cut + n_r)*2 + s_l)*2 + s_r.
    BasisIndex s;
    s.n_l = 2;
    s.n_r = 1;
    s.s_l = 1;
    s.s_r = 0;
    CHECK(encode(s, n_cut) == ((2 * n_cut + 1) * 2 + 1) * 2 + 0);
}

TEST_CASE("n_cut=1 freezes the photon sector") {
    // With one Fock state per cavity the ladder terms vanish and
    // H = (eta/2)(sz_L + sz_R) with eigenvalues {-eta, 0, 0, +eta}.
    const double eta = 37.5;
    const auto h = build_hamiltonian(make_params(0.9, eta, 0.3, 1));
    CHECK(h.dim() == 4);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.mat.to_dense());
    CHECK(es.eigenvalues()(0) == doctest::Approx(-eta).epsilon(1e-14));
    CHECK(es.eigenvalues()(1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(es.eigenvalues()(2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(es.eigenvalues()(3) == doctest::Approx(eta).epsilon(1e-14));
}

TEST_CASE("ladder amplitudes sqrt(n+1)") {
    const int n_cut = 6;
    const ModelParams p = make_params(0, 1, 0, n_cut);
    const CsrMatrix x = build_quadrature_operator(p, Cavity::left);
    for (int n = 0; n + 1 < n_cut; ++n) {
        BasisIndex lo, hi;
        lo.n_l = n;
        hi.n_l = n + 1;
        const double amp = x.coeff(encode(hi, n_cut), encode(lo, n_cut));
        CHECK(amp == doctest::Approx(std::sqrt(double(n + 1))).epsilon(1e-15));
    }
    // No amplitude out of the truncated space: top row has no upward entry.
    BasisIndex top;
    top.n_l = n_cut - 1;
    CHECK(x.coeff(encode(top, n_cut), encode(top, n_cut)) == 0.0);
}

TEST_CASE("decoupled vacua ground energy -eta") {
    for (int n_cut : {2, 5}) {
        const auto h = build_hamiltonian(make_params(0, 123.0, 0, n_cut));
        const auto lo = lowest_k_dense(h, 1);
        CHECK(lo[0].value == doctest::Approx(-123.0).epsilon(1e-14));
    }
}

TEST_CASE("matvec against dense oracle, 16x16") {
    const ModelParams p = make_params(0.8, 25, 0.15, 2);
    const auto h = build_hamiltonian(p);
    CHECK(h.dim() == 16);
    const Eigen::MatrixXd dense = testsupport::dense_hamiltonian(p);
    const Eigen::VectorXd v = random_vector(16, 11);
    const Eigen::VectorXd via_csr = h.apply(v);
    const Eigen::VectorXd via_dense = dense * v;
    CHECK((via_csr - via_dense).norm() <= 1e-12 * via_dense.norm());
}

TEST_CASE("matvec basics: diagonal case and bilinearity symmetry") {
    // n_cut=1, g=0: H is diagonal; H e0 = diag0 * e0.
    const auto hd = build_hamiltonian(make_params(0, 7, 0.2, 1));
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(4);
    e0(0) = 1.0;
    const Eigen::VectorXd y = hd.apply(e0);
    CHECK(y(0) == doctest::Approx(hd.mat.coeff(0, 0)).epsilon(1e-15));
    CHECK(y.tail(3).norm() == 0.0);

    // (Hv)^T w == v^T (Hw) for random v, w.
    const auto h = build_hamiltonian(make_params(0.6, 40, 0.2, 4));
    const Eigen::VectorXd v = random_vector(h.dim(), 1);
    const Eigen::VectorXd w = random_vector(h.dim(), 2);
    const double lhs = h.apply(v).dot(w);
    const double rhs = v.dot(h.apply(w));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("matvec dimension mismatch") {
    const auto h = build_hamiltonian(make_params(0.5, 10, 0.1, 2));
    Eigen::VectorXd wrong = Eigen::VectorXd::Zero(h.dim() + 1);
    CHECK_THROWS_AS((void)h.apply(wrong), std::invalid_argument);
}

TEST_CASE("matvec worker-count independence is bitwise") {
    const ModelParams p = make_params(0.7, 200, 0.3, 16);
    const auto h = build_hamiltonian(p);
    const Eigen::VectorXd v = random_vector(h.dim(), 3);
    const Eigen::VectorXd y1 = h.apply(v, 1);
    for (int workers : {2, 4}) {
        const Eigen::VectorXd yw = h.apply(v, workers);
        CHECK(std::memcmp(y1.data(), yw.data(), sizeof(double) * h.dim()) == 0);
    }
}

TEST_CASE("dense oracle equality for random small instances") {
    std::mt19937 rng(20260825);
    std::uniform_real_distribution<double> ug(0.0, 1.0);
    std::uniform_real_distribution<double> uj(0.0, 0.5);
    std::uniform_real_distribution<double> ue(5.0, 80.0);
    for (int draw = 0; draw < 8; ++draw) {
        const int n_cut = 2 + int(rng() % 3);
        const ModelParams p = make_params(ug(rng), ue(rng), uj(rng), n_cut);
        const auto h = build_hamiltonian(p);
        const Eigen::MatrixXd dense = testsupport::dense_hamiltonian(p);
        const double scale = dense.cwiseAbs().maxCoeff();
        CHECK((h.mat.to_dense() - dense).cwiseAbs().maxCoeff() <= 1e-13 * scale);
    }
}

TEST_CASE("hermiticity of the stored pattern") {
    for (auto p : {make_params(0.7, 1500, 0.255, 12),
                   make_params(0.3, 50, 0.45, 5), make_params(0, 10, 0, 3)}) {
        const auto h = build_hamiltonian(p);
        CHECK(h.mat.is_symmetric(0.0));
    }
}

TEST_CASE("hopping operator is dH/dJ") {
    const ModelParams p0 = make_params(0.6, 30, 0.1, 4);
    ModelParams p1 = p0;
    p1.j = 0.35;
    const Eigen::MatrixXd h0 = build_hamiltonian(p0).mat.to_dense();
    const Eigen::MatrixXd h1 = build_hamiltonian(p1).mat.to_dense();
    const Eigen::MatrixXd hop = build_hopping_operator(p0).to_dense();
    CHECK(((h1 - h0) / (p1.j - p0.j) - hop).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((hop - testsupport::dense_hopping(p0)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("parity vector examples and commutation") {
    const ModelParams p = make_params(0.7, 60, 0.2, 4);
    const Eigen::VectorXd pi = parity_vector(p);

    BasisIndex vac; // n=0, both spins down
    CHECK(pi(encode(vac, p.n_cut)) == +1.0);
    BasisIndex one = vac;
    one.n_l = 1;
    CHECK(pi(encode(one, p.n_cut)) == -1.0);
    CHECK((pi - testsupport::dense_parity(p)).cwiseAbs().maxCoeff() == 0.0);

    // <psi|Pi H Pi|psi> = <psi|H|psi> and the commutator bound.
    const auto h = build_hamiltonian(p);
    const Eigen::VectorXd v = random_vector(h.dim(), 5);
    const Eigen::VectorXd pv = pi.cwiseProduct(v);
    const double quad_direct = v.dot(h.apply(v));
    const double quad_conj = pv.dot(h.apply(pv));
    CHECK(quad_direct == doctest::Approx(quad_conj).epsilon(1e-12));

    const Eigen::VectorXd comm = h.apply(pv) - pi.cwiseProduct(h.apply(v));
    CHECK(comm.norm() <= 1e-12 * v.norm() * h.mat.norm_one());
}

TEST_CASE("parity block structure: no cross-sector entries") {
    const ModelParams p = make_params(0.9, 80, 0.4, 5);
    const auto h = build_hamiltonian(p);
    const Eigen::VectorXd pi = parity_vector(p);
    for (Index r = 0; r < h.dim(); ++r) {
        for (Index k = h.mat.row_ptr[r]; k < h.mat.row_ptr[r + 1]; ++k) {
            if (h.mat.val[k] != 0.0) CHECK(pi(r) == pi(h.mat.col[k]));
        }
    }
}

TEST_CASE("swap relabeling maps H onto itself") {
    const ModelParams p = make_params(0.7, 70, 0.25, 4);
    const auto h = build_hamiltonian(p);
    const auto perm = swap_permutation(p);
    // Involution.
    for (Index i = 0; i < h.dim(); ++i) CHECK(perm[perm[i]] == i);
    // H[p(r), p(c)] == H[r, c] entry by entry over the stored pattern.
    for (Index r = 0; r < h.dim(); ++r) {
        for (Index k = h.mat.row_ptr[r]; k < h.mat.row_ptr[r + 1]; ++k) {
            const double mirrored = h.mat.coeff(perm[r], perm[h.mat.col[k]]);
            CHECK(mirrored == doctest::Approx(h.mat.val[k]).epsilon(1e-15));
        }
    }
}

TEST_CASE("per-row fill stays within the 9-entry stencil") {
    const auto h = build_hamiltonian(make_params(0.7, 1000, 0.3, 10));
    CHECK(h.mat.max_row_nnz() <= 9);
}

TEST_CASE("truncation monotonicity of the ground energy") {
    // Normal phase: occupations are small, so the n_cut ladder converges
    // geometrically right away.
    {
        std::vector<double> e;
        for (int n_cut : {4, 8, 12, 16}) {
            const auto h = build_hamiltonian(make_params(0.7, 50, 0.2, n_cut));
            e.push_back(lowest_k_dense(h, 1)[0].value);
        }
        CHECK(std::abs(e[2] - e[1]) < std::abs(e[1] - e[0]));
        CHECK(std::abs(e[3] - e[2]) < std::abs(e[2] - e[1]));
    }
    // Superradiant side at small eta (mean occupation ~5), once n_cut clears
    // the occupied window.
    {
        LanczosConfig cfg;
        cfg.tol = 1e-12;
        std::vector<double> e;
        for (int n_cut : {14, 18, 22, 26}) {
            const auto h = build_hamiltonian(make_params(0.7, 20, 0.3, n_cut));
            e.push_back(ground_state(h, cfg).value);
        }
        CHECK(std::abs(e[2] - e[1]) < std::abs(e[1] - e[0]));
        CHECK(std::abs(e[3] - e[2]) < std::abs(e[2] - e[1]));
    }
}

TEST_CASE("triplet dump format and round trip") {
    const ModelParams p = make_params(0.25, 12.5, 0.125, 2);
    const auto h = build_hamiltonian(p);
    std::ostringstream os;
    dump_hamiltonian(os, h);
    std::istringstream is(os.str());

    std::string hash;
    std::string kv;
    is >> hash;
    CHECK(hash == "#");
    Index dim = 0;
    double g = 0, eta = 0, j = 0;
    int n_cut = 0;
    is >> kv;
    CHECK(std::sscanf(kv.c_str(), "dim=%ld", &dim) == 1);
    is >> kv;
    CHECK(std::sscanf(kv.c_str(), "g=%lf", &g) == 1);
    is >> kv;
    CHECK(std::sscanf(kv.c_str(), "eta=%lf", &eta) == 1);
    is >> kv;
    CHECK(std::sscanf(kv.c_str(), "J=%lf", &j) == 1);
    is >> kv;
    CHECK(std::sscanf(kv.c_str(), "ncut=%d", &n_cut) == 1);
    CHECK(dim == h.dim());
    CHECK(g == p.g);
    CHECK(eta == p.eta);
    CHECK(j == p.j);
    CHECK(n_cut == p.n_cut);

    Index row, colidx;
    double value;
    Index seen = 0;
    while (is >> row >> colidx >> value) {
        CHECK(h.mat.coeff(row, colidx) == value);
        ++seen;
    }
    CHECK(seen == h.mat.nnz());
}
