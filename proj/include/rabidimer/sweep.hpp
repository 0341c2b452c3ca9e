// sweep.hpp — parameter-sweep orchestration: grids, checkpoint/resume, CSV
// artifacts. Backs every subcommand of the command-line front end.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rabidimer/criticality.hpp"
#include "rabidimer/observables.hpp"

namespace rabidimer {

enum class SweepMode { observables, fs_scan, scaling, collapse, phase_diagram };

std::string to_string(SweepMode mode);
SweepMode sweep_mode_from_string(const std::string& name);

// Explicit J grid; count == 0 requests the per-g auto window
// [0.6, 1.4] * jc(g) sampled at SweepConfig::grid_points.
struct JGrid {
    double min{0.0};
    double max{0.0};
    int count{0};
};

struct SweepConfig {
    SweepMode mode{SweepMode::observables};
    std::vector<double> g_values;
    std::vector<double> eta_values;
    JGrid j_grid;
    int n_cut{80};
    double delta_j{0.0}; // 0 = mode default: 5e-5 scans, 1e-5 exponent fits
    double tol{1e-10};
    int max_iter{20000};
    int restart_dim{256};
    std::uint64_t seed{0x5eedc0de5eedc0deULL};
    int sector{1};
    std::string reduction{"parity_swap"}; // none | parity | parity_swap
    int grid_points{41};
    double bracket_tol{1e-6};
    double nu{0.0}; // collapse mode; 0 = use fitted 2/mu
    int workers{1};
    std::string out;
    std::string checkpoint; // empty = no checkpointing
    bool keep_going{false};

    void resolve_defaults(); // fills mode-dependent blanks (delta_j)
    void validate() const;
    std::string canonical_text() const; // fixed field order; hashed
    std::uint64_t config_hash() const;  // FNV-1a 64 of canonical_text
};

// One completed grid point. Unset diagnostics (e.g. chi_f in observables
// mode) are stored as NaN and serialized as `nan`.
struct ResultRow {
    double g{0.0};
    double eta{0.0};
    int n_cut{0};
    double j{0.0};
    double e0;
    double n_l;
    double n_r;
    double x2_minus;
    double fidelity;
    double chi_f;
    unsigned flags{0};

    ResultRow();
    std::string flags_text() const; // ';'-joined tokens, e.g. "trunc;noconv"
};

inline constexpr unsigned kRowTruncation = 1u;
inline constexpr unsigned kRowNotConverged = 2u;
inline constexpr unsigned kRowFailed = 4u; // keep-going recorded a hard failure

LanczosConfig solver_config(const SweepConfig& config);

// Per-point pipelines. The fs variant shares one ground-state solve between
// the observables and the fidelity pair (J, J + delta_j).
ResultRow evaluate_observables_point(const SweepConfig& config, double g,
                                     double eta, double j);
ResultRow evaluate_fs_point(const SweepConfig& config, double g, double eta,
                            double j);

// Stable identity of a grid point inside a checkpoint.
std::string row_key(SweepMode mode, double g, double eta, int n_cut, double j,
                    double delta_j, std::uint64_t seed);

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows);

// Executes the configured sweep; returns a process exit status.
int run_sweep(const SweepConfig& config);

// Re-runs the sweep recorded in a checkpoint, computing only missing points.
int resume_sweep(const std::string& checkpoint_path);

} // namespace rabidimer
