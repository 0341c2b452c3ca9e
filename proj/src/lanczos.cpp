#include "rabidimer/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rabidimer/symmetry.hpp"

namespace rabidimer {

void LanczosConfig::validate() const {
    if (!(tol > 0.0))
        throw std::invalid_argument("LanczosConfig: tol must be > 0");
    if (max_iter < 2)
        throw std::invalid_argument("LanczosConfig: max_iter must be >= 2");
    if (sector != 0 && sector != 1 && sector != -1)
        throw std::invalid_argument("LanczosConfig: sector must be -1, 0 or +1");
    if (swap_sector != 1 && swap_sector != -1)
        throw std::invalid_argument("LanczosConfig: swap_sector must be +1 or -1");
    if (restart_dim < 8)
        throw std::invalid_argument("LanczosConfig: restart_dim must be >= 8");
}

Eigen::VectorXd seeded_start_vector(Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd v(dim);
    for (Index i = 0; i < dim; ++i) {
        // Top 53 bits -> [0,1); avoids distribution objects whose output is
        // not pinned down by the standard.
        const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
        v(i) = 2.0 * u - 1.0;
    }
    return v;
}

void fix_sign_gauge(Eigen::VectorXd& v) {
    Index best = 0;
    double mag = -1.0;
    for (Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > mag) {
            mag = a;
            best = i;
        }
    }
    if (v.size() > 0 && v(best) < 0.0) v = -v;
}

namespace {

constexpr std::uint64_t kSeedStride = 0x9e3779b97f4a7c15ULL;

struct RitzPair {
    double value{0.0};
    Eigen::VectorXd vector;
    double residual{0.0};
    bool converged{false};
};

struct EngineOutcome {
    std::vector<RitzPair> pairs;
    int iterations{0};
};

// Thick-restart Lanczos with full (two-pass classical Gram-Schmidt)
// reorthogonalization. The projected matrix P = V^T A V is kept explicitly;
// each expansion fills one column from the actually computed projections, so
// restarts (which leave P diagonal-plus-arrowhead) need no special casing in
// the Rayleigh-Ritz step. The coupling of the block to the rest of the space
// always runs through the newest frontier column, so the classic residual
// estimate beta*|S(b-1,i)| stays valid across restarts and resamples.
//
// `mask` (0/1 indicator) confines every generated vector to an invariant
// coordinate subspace; the matvec never repopulates masked-out entries
// because H stores no cross-sector couplings.
EngineOutcome run_trl(const CsrMatrix& a, int k_want, const LanczosConfig& cfg,
                      const Eigen::VectorXd* start, const Eigen::VectorXd* mask) {
    const Index dim = a.dim;
    if (dim < 1) throw std::invalid_argument("lanczos: empty operator");
    if (k_want < 1 || static_cast<Index>(k_want) > dim)
        throw std::invalid_argument("lanczos: k out of range");

    const int m_max = static_cast<int>(
        std::min<Index>(std::max(cfg.restart_dim, 3 * k_want + 16), dim));
    const int keep = std::min(
        m_max - 4 > k_want ? m_max - 4 : k_want,
        cfg.keep_ritz > 0 ? cfg.keep_ritz : std::max(16, 2 * k_want + 6));
    const double beta_floor = 1e-14 * std::max(1.0, a.norm_one());

    Eigen::MatrixXd V(dim, m_max + 1);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m_max, m_max);
    Eigen::VectorXd w(dim), h, h2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;

    std::uint64_t seed = cfg.seed;
    auto fresh_vector = [&]() {
        Eigen::VectorXd r = seeded_start_vector(dim, seed);
        seed += kSeedStride;
        if (mask) r.array() *= mask->array();
        return r;
    };

    // Start vector: caller-supplied (projected into the sector) with a seeded
    // fallback when the projection is numerically zero.
    {
        Eigen::VectorXd v0;
        bool ok = false;
        if (start) {
            v0 = *start;
            if (mask) v0.array() *= mask->array();
            ok = v0.norm() > 1e-12 * std::max(1.0, start->norm());
        }
        for (int attempt = 0; !ok && attempt < 64; ++attempt) {
            v0 = fresh_vector();
            ok = v0.norm() > 1e-8;
        }
        if (!ok)
            throw std::runtime_error("lanczos: could not seed a start vector in the requested sector");
        V.col(0) = v0 / v0.norm();
    }

    int b = 0;          // applied block size; P.topLeft(b,b) = V_b^T A V_b
    int m = 1;          // orthonormal columns present (frontier = col b)
    int matvecs = 0;    // Krylov expansions (reported as iterations)
    int since_check = 0;
    double beta = 0.0;
    double beta_prev = 0.0;
    double est_safety = 0.5;
    bool done = false;
    EngineOutcome out;

    // Builds Ritz pairs 0..k_eff-1 from the current `eig` over block `bs` and
    // verifies their true residuals. Returns true when all satisfy the
    // convergence contract.
    auto harvest = [&](int bs, int k_eff) {
        out.pairs.clear();
        bool all_ok = true;
        for (int i = 0; i < k_eff; ++i) {
            RitzPair p;
            p.value = eig.eigenvalues()(i);
            p.vector.noalias() = V.leftCols(bs) * eig.eigenvectors().col(i);
            const double nrm = p.vector.norm();
            if (nrm > 0.0) p.vector /= nrm;
            a.apply(p.vector.data(), w.data(), cfg.workers);
            p.residual = (w - p.value * p.vector).norm();
            p.converged = p.residual <= cfg.tol * std::max(1.0, std::abs(p.value));
            all_ok = all_ok && p.converged;
            out.pairs.push_back(std::move(p));
        }
        return all_ok;
    };

    while (!done) {
        // --- expand: apply A to the frontier column
        a.apply(V.col(b).data(), w.data(), cfg.workers);
        ++matvecs;
        if (cfg.reorth) {
            h.noalias() = V.leftCols(m).transpose() * w;
            w.noalias() -= V.leftCols(m) * h;
            h2.noalias() = V.leftCols(m).transpose() * w;
            w.noalias() -= V.leftCols(m) * h2;
            h += h2;
        } else {
            h = Eigen::VectorXd::Zero(m);
            const double alpha = V.col(b).dot(w);
            h(b) = alpha;
            w -= alpha * V.col(b);
            if (b > 0) {
                h(b - 1) = beta_prev;
                w -= beta_prev * V.col(b - 1);
            }
        }
        P.col(b).head(m) = h;
        P.row(b).head(m) = h.transpose();
        beta = w.norm();
        beta_prev = beta;
        ++b;
        const bool breakdown = beta <= beta_floor;
        if (!breakdown) {
            V.col(b) = w / beta;
            m = b + 1;
        } else {
            m = b; // invariant subspace: no frontier yet
        }

        // --- convergence check (cheap estimates first, then true residuals)
        ++since_check;
        const bool budget_out = matvecs >= cfg.max_iter;
        const bool block_full = b == m_max;
        if (since_check >= 8 || block_full || budget_out || breakdown) {
            since_check = 0;
            eig.compute(P.topLeftCorner(b, b));
            const int k_eff = std::min(k_want, b);
            bool est_ok = k_eff == k_want;
            for (int i = 0; i < k_eff && est_ok; ++i) {
                const double est = beta * std::abs(eig.eigenvectors()(b - 1, i));
                if (est > est_safety * cfg.tol *
                              std::max(1.0, std::abs(eig.eigenvalues()(i))))
                    est_ok = false;
            }
            if (est_ok || breakdown || budget_out) {
                if (harvest(b, k_eff) && k_eff == k_want) {
                    done = true;
                } else if (budget_out) {
                    done = true; // best effort, converged=false on some pairs
                } else {
                    // estimates were optimistic; demand tighter ones next time
                    est_safety = std::max(est_safety * 0.25, 1e-4);
                }
            }
        }
        if (done) break;

        // --- breakdown: extend with a random direction orthogonal to the block
        if (breakdown) {
            bool extended = false;
            for (int attempt = 0; attempt < 32 && !extended; ++attempt) {
                Eigen::VectorXd r = fresh_vector();
                h.noalias() = V.leftCols(b).transpose() * r;
                r.noalias() -= V.leftCols(b) * h;
                h2.noalias() = V.leftCols(b).transpose() * r;
                r.noalias() -= V.leftCols(b) * h2;
                const double nrm = r.norm();
                if (nrm > 1e-8) {
                    V.col(b) = r / nrm;
                    m = b + 1;
                    extended = true;
                }
            }
            if (!extended) {
                // sector space exhausted: current pairs are exact
                eig.compute(P.topLeftCorner(b, b));
                harvest(b, std::min(k_want, b));
                done = true;
                break;
            }
            beta = 0.0;
            beta_prev = 0.0;
        }

        // --- thick restart: compress onto the lowest `keep` Ritz vectors
        if (b == m_max) {
            if (!cfg.reorth) {
                // without reorthogonalization restarting is not meaningful;
                // stop with the best available block
                eig.compute(P.topLeftCorner(b, b));
                harvest(b, std::min(k_want, b));
                done = true;
                break;
            }
            eig.compute(P.topLeftCorner(b, b));
            const int kk = std::min(keep, b - 1);
            Eigen::MatrixXd y;
            y.noalias() = V.leftCols(b) * eig.eigenvectors().leftCols(kk);
            V.leftCols(kk) = y;
            V.col(kk) = V.col(b); // frontier survives the restart
            P.setZero();
            for (int i = 0; i < kk; ++i) P(i, i) = eig.eigenvalues()(i);
            b = kk;
            m = kk + 1;
            beta_prev = 0.0;
        }
    }

    out.iterations = matvecs;
    return out;
}

std::vector<EigenResult> assemble(EngineOutcome&& eo, const SubspaceMap* map) {
    std::vector<EigenResult> out;
    out.reserve(eo.pairs.size());
    for (auto& p : eo.pairs) {
        EigenResult r;
        r.value = p.value;
        r.vector = map ? map->prolong(p.vector) : std::move(p.vector);
        const double nrm = r.vector.norm();
        if (nrm > 0.0) r.vector /= nrm;
        fix_sign_gauge(r.vector);
        r.residual = p.residual;
        r.iterations = eo.iterations;
        r.converged = p.converged;
        out.push_back(std::move(r));
    }
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        if (std::abs(out[i + 1].value - out[i].value) < 1e-12) {
            out[i].degenerate = true;
            out[i + 1].degenerate = true;
        }
    }
    return out;
}

} // namespace

std::vector<EigenResult> lowest_k_lanczos(const SparseHamiltonian& h, int k,
                                          const LanczosConfig& cfg) {
    cfg.validate();
    if (k < 1 || static_cast<Index>(k) > h.dim())
        throw std::invalid_argument("lowest_k_lanczos: k out of range");

    if (cfg.reduce == SymmetryReduction::none) {
        Eigen::VectorXd mask_store;
        const Eigen::VectorXd* mask = nullptr;
        if (cfg.sector != 0) {
            const Eigen::VectorXd par = parity_vector(h.params);
            mask_store = (par.array() == static_cast<double>(cfg.sector))
                             .cast<double>();
            mask = &mask_store;
        }
        return assemble(run_trl(h.mat, k, cfg, cfg.start, mask), nullptr);
    }

    const int sector = cfg.sector == 0 ? 1 : cfg.sector;
    const SubspaceMap map =
        cfg.reduce == SymmetryReduction::parity
            ? parity_sector_map(h.params, sector)
            : parity_swap_sector_map(h.params, sector, cfg.swap_sector);
    if (static_cast<Index>(k) > map.reduced_dim())
        throw std::invalid_argument("lowest_k_lanczos: k exceeds sector dimension");
    const CsrMatrix reduced = map.reduce_matrix(h.mat);
    Eigen::VectorXd start_reduced;
    LanczosConfig inner = cfg;
    inner.start = nullptr;
    if (cfg.start) {
        start_reduced = map.restrict_vector(*cfg.start);
        inner.start = &start_reduced;
    }
    return assemble(run_trl(reduced, k, inner, inner.start, nullptr), &map);
}

EigenResult ground_state(const SparseHamiltonian& h, const LanczosConfig& cfg) {
    return std::move(lowest_k_lanczos(h, 1, cfg).front());
}

std::vector<EigenResult> lowest_k_lanczos_csr(const CsrMatrix& a, int k,
                                              const LanczosConfig& cfg) {
    cfg.validate();
    if (cfg.sector != 0 || cfg.reduce != SymmetryReduction::none)
        throw std::invalid_argument(
            "lowest_k_lanczos_csr: symmetry options need a model-attached Hamiltonian");
    return assemble(run_trl(a, k, cfg, cfg.start, nullptr), nullptr);
}

std::vector<EigenResult> lowest_k_dense_csr(const CsrMatrix& a, int k) {
    if (a.dim > 4096)
        throw std::invalid_argument("lowest_k_dense: dimension guard (4096) exceeded");
    if (k < 1 || static_cast<Index>(k) > a.dim)
        throw std::invalid_argument("lowest_k_dense: k out of range");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.to_dense());
    std::vector<EigenResult> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        EigenResult r;
        r.value = eig.eigenvalues()(i);
        r.vector = eig.eigenvectors().col(i);
        fix_sign_gauge(r.vector);
        r.residual = (a.apply(r.vector) - r.value * r.vector).norm();
        r.iterations = 0;
        r.converged = true;
        out.push_back(std::move(r));
    }
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        if (std::abs(out[i + 1].value - out[i].value) < 1e-12) {
            out[i].degenerate = true;
            out[i + 1].degenerate = true;
        }
    }
    return out;
}

std::vector<EigenResult> lowest_k_dense(const SparseHamiltonian& h, int k) {
    return lowest_k_dense_csr(h.mat, k);
}

} // namespace rabidimer
