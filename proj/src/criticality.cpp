#include "rabidimer/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rabidimer/parallel.hpp"

namespace rabidimer {

namespace {

double branch_energy(double g, double j, double x_l, double x_r, double sign) {
    const double t_l = x_l * x_l + sign * std::sqrt(1.0 + 2.0 * g * g * x_l * x_l);
    const double t_r = x_r * x_r + sign * std::sqrt(1.0 + 2.0 * g * g * x_r * x_r);
    return 0.5 * (t_l + t_r) + 2.0 * j * x_l * x_r;
}

} // namespace

double MeanFieldResult::e_minus(double x_l, double x_r) const {
    return branch_energy(g, j, x_l, x_r, -1.0);
}

double MeanFieldResult::e_plus(double x_l, double x_r) const {
    return branch_energy(g, j, x_l, x_r, +1.0);
}

MeanFieldResult mean_field(double g, double j) {
    if (g < 0.0 || j < 0.0)
        throw std::invalid_argument("mean_field: g and j must be >= 0");
    MeanFieldResult r;
    r.g = g;
    r.j = j;
    r.jc = 0.5 * (1.0 - g * g);
    r.lambda_plus = 1.0 - g * g + 2.0 * j;
    r.lambda_minus = 1.0 - g * g - 2.0 * j;
    return r;
}

namespace {

struct PeakEngine {
    const ChiEvaluator& eval;
    std::map<double, FsPoint> cache; // keyed by J; dedupes re-evaluations

    const FsPoint& at(double j) {
        auto it = cache.find(j);
        if (it == cache.end()) it = cache.emplace(j, eval(j)).first;
        return it->second;
    }
    double chi(double j) { return at(j).chi_f; }
};

// One parabolic-interpolation step on the bracket a < b < c (max at b);
// falls back to bisecting the larger half when the vertex is unusable.
double propose_vertex(double a, double b, double c, double fa, double fb, double fc) {
    const double d1 = b - a;
    const double d2 = c - b;
    const double num = d1 * d1 * (fb - fc) - d2 * d2 * (fb - fa);
    const double den = d1 * (fb - fc) + d2 * (fb - fa);
    if (den != 0.0 && std::isfinite(num / den)) {
        const double u = b + 0.5 * num / den;
        const double margin = 0.05 * std::min(d1, d2);
        if (u > a + margin && u < c - margin && std::abs(u - b) > 1e-18)
            return u;
    }
    return d1 > d2 ? 0.5 * (a + b) : 0.5 * (b + c); // bisect the larger half
}

} // namespace

FsCurve locate_peak(double g, double eta, int n_cut, double delta_j,
                    double j_lo, double j_hi, const LanczosConfig& cfg,
                    const PeakSearchOptions& opt, const ChiEvaluator& eval) {
    if (opt.grid_points < 5)
        throw std::invalid_argument("locate_peak: grid_points must be >= 5");
    if (!(opt.bracket_tol > 0.0))
        throw std::invalid_argument("locate_peak: bracket_tol must be > 0");
    if (j_lo == j_hi) {
        const double jc = mean_field(g, 0.0).jc;
        if (jc <= 0.0)
            throw std::invalid_argument("locate_peak: auto window needs jc > 0");
        j_lo = 0.6 * jc;
        j_hi = 1.4 * jc;
    }
    if (!(j_lo < j_hi))
        throw std::invalid_argument("locate_peak: window must satisfy j_lo < j_hi");

    ChiEvaluator physical;
    if (!eval) {
        physical = [&](double j) {
            ModelParams p;
            p.g = g;
            p.eta = eta;
            p.n_cut = n_cut;
            p.j = j;
            return fidelity_susceptibility(p, delta_j, cfg);
        };
    }
    const ChiEvaluator& chi_eval = eval ? eval : physical;
    PeakEngine engine{chi_eval, {}};

    FsCurve curve;
    curve.g = g;
    curve.eta = eta;
    curve.n_cut = n_cut;
    curve.delta_j = delta_j;

    // --- coarse grid, widened when the argmax lands on a window edge
    std::vector<double> grid(static_cast<std::size_t>(opt.grid_points));
    auto fill_grid = [&]() {
        const double h = (j_hi - j_lo) / (opt.grid_points - 1);
        for (int i = 0; i < opt.grid_points; ++i)
            grid[static_cast<std::size_t>(i)] = j_lo + h * i;
        grid.back() = j_hi;
        // grid phase: points are independent; results land in the cache
        std::vector<FsPoint> pts(grid.size());
        parallel_for(static_cast<std::int64_t>(grid.size()), opt.workers,
                     [&](std::int64_t i) {
                         pts[static_cast<std::size_t>(i)] =
                             chi_eval(grid[static_cast<std::size_t>(i)]);
                     });
        for (std::size_t i = 0; i < grid.size(); ++i)
            engine.cache.emplace(grid[i], pts[i]);
    };
    fill_grid();

    int widen_left = opt.max_widen;
    while (true) {
        std::size_t im = 0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (engine.chi(grid[i]) > engine.chi(grid[im])) im = i;
        const bool at_edge = im == 0 || im + 1 == grid.size();
        if (!at_edge) break;
        if (widen_left-- <= 0) {
            curve.flags |= kCurveEdgePeak;
            break;
        }
        curve.flags |= kCurveWidened;
        const double width = j_hi - j_lo;
        if (im == 0)
            j_lo = std::max(delta_j, j_lo - 0.5 * width);
        else
            j_hi += 0.5 * width;
        fill_grid();
    }

    // --- unimodality audit over the scan
    {
        std::vector<double> js;
        js.reserve(engine.cache.size());
        for (const auto& kv : engine.cache) js.push_back(kv.first);
        int maxima = 0;
        for (std::size_t i = 1; i + 1 < js.size(); ++i) {
            if (engine.chi(js[i]) > engine.chi(js[i - 1]) &&
                engine.chi(js[i]) > engine.chi(js[i + 1]))
                ++maxima;
        }
        if (maxima > 1) curve.flags |= kCurveNonUnimodal;
    }

    // --- bracket the global max among evaluated points
    double a, b, c;
    {
        std::vector<double> js;
        for (const auto& kv : engine.cache) js.push_back(kv.first);
        std::size_t im = 0;
        for (std::size_t i = 1; i < js.size(); ++i)
            if (engine.chi(js[i]) > engine.chi(js[im])) im = i;
        const std::size_t lo = im == 0 ? 0 : im - 1;
        const std::size_t hi = im + 1 < js.size() ? im + 1 : im;
        a = js[lo];
        b = js[im];
        c = js[hi];
        if (lo == im || hi == im) {
            // peak pinned at the outermost evaluated point; keep the best we have
            curve.flags |= kCurveEdgePeak;
        }
    }

    // --- safeguarded successive parabolic interpolation
    if (a < b && b < c) {
        int iters = 0;
        const int max_iters = 240;
        while (c - a > opt.bracket_tol && iters++ < max_iters) {
            const double u =
                propose_vertex(a, b, c, engine.chi(a), engine.chi(b), engine.chi(c));
            if (!(u > a && u < c) || u == b) break;
            const double fu = engine.chi(u);
            if (u > b) {
                if (fu >= engine.chi(b)) {
                    a = b;
                    b = u;
                } else {
                    c = u;
                }
            } else {
                if (fu >= engine.chi(b)) {
                    c = b;
                    b = u;
                } else {
                    a = u;
                }
            }
        }
    }

    curve.j_max = b;
    curve.chi_max = engine.chi(b);
    curve.points.reserve(engine.cache.size());
    for (const auto& kv : engine.cache) {
        curve.points.push_back(kv.second);
        if (!kv.second.converged) curve.flags |= kCurveNotConverged;
    }
    return curve;
}

FitResult fit_mu(const std::vector<std::pair<double, double>>& eta_chi) {
    const std::size_t n = eta_chi.size();
    if (n < 3)
        throw std::invalid_argument("fit_mu: need at least 3 points");
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(eta_chi[i].first > 0.0) || !(eta_chi[i].second > 0.0))
            throw std::invalid_argument("fit_mu: inputs must be positive");
        xs[i] = std::log(eta_chi[i].first);
        ys[i] = std::log(eta_chi[i].second);
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0)
        throw std::invalid_argument("fit_mu: degenerate eta values");
    FitResult r;
    r.value = sxy / sxx;
    double ssr = 0.0;
    const double intercept = my - r.value * mx;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ys[i] - (intercept + r.value * xs[i]);
        ssr += resid * resid;
    }
    r.stderr_ = std::sqrt(std::max(0.0, ssr / static_cast<double>(n - 2)) / sxx);
    return r;
}

double collapse_score(const std::vector<FsCurve>& curves, double nu) {
    if (curves.size() < 2)
        throw std::invalid_argument("collapse_score: need at least 2 curves");
    if (!(nu > 0.0))
        throw std::invalid_argument("collapse_score: nu must be > 0");

    struct Rescaled {
        std::vector<double> u, y;
    };
    std::vector<Rescaled> rs;
    double u_lo = -std::numeric_limits<double>::infinity();
    double u_hi = std::numeric_limits<double>::infinity();
    for (const auto& c : curves) {
        if (c.points.size() < 2 || !(c.chi_max > 0.0))
            throw std::invalid_argument("collapse_score: curve lacks peak metadata");
        const double scale = std::pow(c.eta, 1.0 / nu);
        Rescaled r;
        r.u.reserve(c.points.size());
        r.y.reserve(c.points.size());
        for (const auto& p : c.points) {
            if (!(p.chi_f > 0.0)) continue;
            r.u.push_back(scale * (p.j - c.j_max));
            r.y.push_back((c.chi_max - p.chi_f) / p.chi_f);
        }
        if (r.u.size() < 2)
            throw std::invalid_argument("collapse_score: curve has too few usable points");
        u_lo = std::max(u_lo, r.u.front());
        u_hi = std::min(u_hi, r.u.back());
        rs.push_back(std::move(r));
    }
    if (!(u_lo < u_hi))
        throw std::runtime_error("collapse_score: rescaled curves do not overlap");

    constexpr int kGrid = 101;
    auto interp = [](const Rescaled& r, double u) {
        auto it = std::lower_bound(r.u.begin(), r.u.end(), u);
        if (it == r.u.begin()) return r.y.front();
        if (it == r.u.end()) return r.y.back();
        const std::size_t hi = static_cast<std::size_t>(it - r.u.begin());
        const std::size_t lo = hi - 1;
        const double t = (u - r.u[lo]) / (r.u[hi] - r.u[lo]);
        return r.y[lo] + t * (r.y[hi] - r.y[lo]);
    };

    double acc = 0.0;
    for (int k = 0; k < kGrid; ++k) {
        const double u = u_lo + (u_hi - u_lo) * k / (kGrid - 1);
        double mean = 0.0;
        for (const auto& r : rs) mean += interp(r, u);
        mean /= static_cast<double>(rs.size());
        double var = 0.0;
        for (const auto& r : rs) {
            const double d = interp(r, u) - mean;
            var += d * d;
        }
        acc += var / static_cast<double>(rs.size());
    }
    return std::sqrt(acc / kGrid);
}

ScalingReport make_scaling_report(double g, const std::vector<FsCurve>& curves) {
    ScalingReport rep;
    rep.g = g;
    std::vector<std::pair<double, double>> pts;
    for (const auto& c : curves) {
        rep.etas.push_back(c.eta);
        rep.j_max_per_eta.push_back(c.j_max);
        rep.chi_max_per_eta.push_back(c.chi_max);
        rep.flags |= c.flags;
        pts.emplace_back(c.eta, c.chi_max);
    }
    const FitResult fit = fit_mu(pts);
    rep.mu = fit.value;
    rep.mu_stderr = fit.stderr_;
    rep.nu = 2.0 / rep.mu;
    rep.nu_stderr = 2.0 / (rep.mu * rep.mu) * rep.mu_stderr;
    rep.collapse_score_at_nu = collapse_score(curves, rep.nu);
    return rep;
}

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_scaling_report(std::ostream& os, const ScalingReport& rep) {
    os << "g=" << g17(rep.g) << " mu=" << g17(rep.mu) << " mu_stderr="
       << g17(rep.mu_stderr) << " nu=" << g17(rep.nu) << " nu_stderr="
       << g17(rep.nu_stderr) << "\n";
    os << "collapse_score=" << g17(rep.collapse_score_at_nu) << " flags="
       << rep.flags << "\n";
    for (std::size_t i = 0; i < rep.etas.size(); ++i) {
        os << "eta=" << g17(rep.etas[i]) << " j_max=" << g17(rep.j_max_per_eta[i])
           << " chi_max=" << g17(rep.chi_max_per_eta[i]) << "\n";
    }
}

std::string scaling_report_json(const ScalingReport& rep) {
    nlohmann::json j;
    j["g"] = rep.g;
    j["mu"] = rep.mu;
    j["mu_stderr"] = rep.mu_stderr;
    j["nu"] = rep.nu;
    j["nu_stderr"] = rep.nu_stderr;
    j["collapse_score"] = rep.collapse_score_at_nu;
    j["flags"] = rep.flags;
    j["etas"] = rep.etas;
    j["j_max"] = rep.j_max_per_eta;
    j["chi_max"] = rep.chi_max_per_eta;
    return j.dump(2);
}

} // namespace rabidimer
