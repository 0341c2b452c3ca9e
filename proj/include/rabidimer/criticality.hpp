// criticality.hpp — mean-field phase boundary and the numerical criticality
// pipeline: chi_F peak location, finite-frequency exponent fit, data-collapse
// scoring.

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rabidimer/fidelity.hpp"
#include "rabidimer/lanczos.hpp"
#include "rabidimer/params.hpp"

namespace rabidimer {

// Mean-field analytics of the two-branch energy landscape.
struct MeanFieldResult {
    double g{0.0};
    double j{0.0};
    double jc{0.0};           // (1 - g^2)/2
    double lambda_plus{0.0};  // 1 - g^2 + 2J
    double lambda_minus{0.0}; // 1 - g^2 - 2J

    // E_-+(x_L, x_R) = 1/2 sum_i (x_i^2 -+ sqrt(1 + 2 g^2 x_i^2)) + 2J x_L x_R
    double e_minus(double x_l, double x_r) const;
    double e_plus(double x_l, double x_r) const;
};

MeanFieldResult mean_field(double g, double j);

// Curve-level flags (also aggregated by the sweep layer).
inline constexpr unsigned kCurveEdgePeak = 1u;     // argmax hit a window edge
inline constexpr unsigned kCurveNonUnimodal = 2u;  // several local maxima
inline constexpr unsigned kCurveWidened = 4u;      // window had to be widened
inline constexpr unsigned kCurveNotConverged = 8u; // some point's solve failed

struct FsCurve {
    double g{0.0};
    double eta{0.0};
    int n_cut{0};
    double delta_j{0.0};
    std::vector<FsPoint> points; // strictly increasing in j
    double j_max{0.0};
    double chi_max{0.0};
    unsigned flags{0};
};

struct PeakSearchOptions {
    int grid_points{41};
    double bracket_tol{1e-6};
    int max_widen{3};
    int workers{1}; // grid-phase dispatch; refinement is sequential
};

// chi_F(J) evaluation hook; the default (empty) evaluator solves the physical
// model via fidelity_susceptibility. Tests and the sweep layer inject their
// own (synthetic oracles, checkpoint caches).
using ChiEvaluator = std::function<FsPoint(double)>;

// Coarse grid scan over [j_lo, j_hi] followed by parabolic refinement of the
// peak to a bracket <= bracket_tol. Passing j_lo == j_hi auto-windows to
// [0.6, 1.4] * jc(g).
FsCurve locate_peak(double g, double eta, int n_cut, double delta_j,
                    double j_lo, double j_hi, const LanczosConfig& cfg = {},
                    const PeakSearchOptions& opt = {},
                    const ChiEvaluator& eval = {});

struct FitResult {
    double value{0.0};
    double stderr_{0.0}; // trailing underscore: `stderr` is a <cstdio> macro
};

// OLS of ln(chi_max) on ln(eta); slope = mu.
FitResult fit_mu(const std::vector<std::pair<double, double>>& eta_chi);

// RMS of the pointwise cross-curve standard deviation of the rescaled curves
// (u, y) = (eta^{1/nu} (J - J_max), (chi_max - chi)/chi) on their common
// u-window. Lower = better collapse.
double collapse_score(const std::vector<FsCurve>& curves, double nu);

struct ScalingReport {
    double g{0.0};
    std::vector<double> etas;
    std::vector<double> j_max_per_eta;
    std::vector<double> chi_max_per_eta;
    double mu{0.0};
    double mu_stderr{0.0};
    double nu{0.0};        // 2/mu
    double nu_stderr{0.0}; // (2/mu^2) * mu_stderr
    double collapse_score_at_nu{0.0};
    unsigned flags{0};     // union of curve flags
};

// Fits mu over the curves' (eta, chi_max) and scores the collapse at nu=2/mu.
ScalingReport make_scaling_report(double g, const std::vector<FsCurve>& curves);

// `g=... mu=... mu_stderr=... nu=... nu_stderr=...` plus per-eta
// `eta=... j_max=... chi_max=...` lines.
void write_scaling_report(std::ostream& os, const ScalingReport& report);
std::string scaling_report_json(const ScalingReport& report);

} // namespace rabidimer
