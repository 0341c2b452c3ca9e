#include "rabidimer/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "rabidimer/fidelity.hpp"
#include "rabidimer/model.hpp"
#include "rabidimer/parallel.hpp"

namespace rabidimer {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * t;
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

} // namespace

std::string to_string(SweepMode mode) {
    switch (mode) {
        case SweepMode::observables: return "observables";
        case SweepMode::fs_scan: return "fs-scan";
        case SweepMode::scaling: return "scaling";
        case SweepMode::collapse: return "collapse";
        case SweepMode::phase_diagram: return "phase-diagram";
    }
    throw std::logic_error("to_string: unknown SweepMode");
}

SweepMode sweep_mode_from_string(const std::string& name) {
    if (name == "observables") return SweepMode::observables;
    if (name == "fs-scan") return SweepMode::fs_scan;
    if (name == "scaling") return SweepMode::scaling;
    if (name == "collapse") return SweepMode::collapse;
    if (name == "phase-diagram") return SweepMode::phase_diagram;
    throw std::invalid_argument("unknown sweep mode: " + name);
}

void SweepConfig::resolve_defaults() {
    if (delta_j == 0.0) {
        // curve scans follow the coarser step, exponent fits the finer one
        delta_j = (mode == SweepMode::scaling || mode == SweepMode::collapse)
                      ? 1e-5
                      : 5e-5;
    }
}

void SweepConfig::validate() const {
    if (g_values.empty())
        throw std::invalid_argument("sweep: g grid is empty");
    for (double g : g_values)
        if (!(g >= 0.0)) throw std::invalid_argument("sweep: g must be >= 0");
    if (mode != SweepMode::phase_diagram) {
        if (eta_values.empty())
            throw std::invalid_argument("sweep: eta grid is empty");
        for (double e : eta_values)
            if (!(e > 0.0)) throw std::invalid_argument("sweep: eta must be > 0");
        if (n_cut < 1) throw std::invalid_argument("sweep: n_cut must be >= 1");
        if (!(delta_j > 0.0))
            throw std::invalid_argument("sweep: delta_j must be > 0");
        if (j_grid.count < 0)
            throw std::invalid_argument("sweep: j grid count must be >= 0");
        if (j_grid.count > 1 && !(j_grid.min < j_grid.max))
            throw std::invalid_argument("sweep: j grid must be strictly increasing");
        if (j_grid.count == 0) {
            for (double g : g_values)
                if (!(g < 1.0))
                    throw std::invalid_argument(
                        "sweep: auto J window needs jc(g) > 0; pass an explicit j grid");
        }
    }
    if (mode == SweepMode::scaling && eta_values.size() < 3)
        throw std::invalid_argument("sweep: scaling needs at least 3 eta values");
    if (mode == SweepMode::collapse && eta_values.size() < 2)
        throw std::invalid_argument("sweep: collapse needs at least 2 eta values");
    if (!(tol > 0.0)) throw std::invalid_argument("sweep: tol must be > 0");
    if (max_iter < 2) throw std::invalid_argument("sweep: max_iter must be >= 2");
    if (restart_dim < 8)
        throw std::invalid_argument("sweep: restart_dim must be >= 8");
    if (sector != -1 && sector != 0 && sector != 1)
        throw std::invalid_argument("sweep: sector must be -1, 0 or +1");
    if (reduction != "none" && reduction != "parity" && reduction != "parity_swap")
        throw std::invalid_argument("sweep: reduction must be none|parity|parity_swap");
    if (grid_points < 5)
        throw std::invalid_argument("sweep: grid_points must be >= 5");
    if (!(bracket_tol > 0.0))
        throw std::invalid_argument("sweep: bracket_tol must be > 0");
    if (nu < 0.0) throw std::invalid_argument("sweep: nu must be >= 0");
    if (workers < 1) throw std::invalid_argument("sweep: workers must be >= 1");
    if (out.empty()) throw std::invalid_argument("sweep: output path is empty");
}

std::string SweepConfig::canonical_text() const {
    std::ostringstream os;
    os << "mode=" << to_string(mode) << "\n";
    os << "g=";
    for (std::size_t i = 0; i < g_values.size(); ++i)
        os << (i ? "," : "") << g17(g_values[i]);
    os << "\neta=";
    for (std::size_t i = 0; i < eta_values.size(); ++i)
        os << (i ? "," : "") << g17(eta_values[i]);
    os << "\nj_min=" << g17(j_grid.min) << "\nj_max=" << g17(j_grid.max)
       << "\nj_count=" << j_grid.count << "\nncut=" << n_cut << "\ndelta_j="
       << g17(delta_j) << "\ntol=" << g17(tol) << "\nmax_iter=" << max_iter
       << "\nrestart_dim=" << restart_dim << "\nseed=" << seed << "\nsector="
       << sector << "\nreduction=" << reduction << "\ngrid_points="
       << grid_points << "\nbracket_tol=" << g17(bracket_tol) << "\nnu="
       << g17(nu) << "\n";
    return os.str();
}

std::uint64_t SweepConfig::config_hash() const {
    // FNV-1a 64
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

ResultRow::ResultRow()
    : e0(kNan), n_l(kNan), n_r(kNan), x2_minus(kNan), fidelity(kNan), chi_f(kNan) {}

std::string ResultRow::flags_text() const {
    std::string s;
    auto add = [&](const char* tok) {
        if (!s.empty()) s += ';';
        s += tok;
    };
    if (flags & kRowTruncation) add("trunc");
    if (flags & kRowNotConverged) add("noconv");
    if (flags & kRowFailed) add("fail");
    return s;
}

LanczosConfig solver_config(const SweepConfig& config) {
    LanczosConfig lc;
    lc.max_iter = config.max_iter;
    lc.tol = config.tol;
    lc.seed = config.seed;
    lc.sector = config.sector;
    lc.restart_dim = config.restart_dim;
    if (config.reduction == "parity") lc.reduce = SymmetryReduction::parity;
    else if (config.reduction == "parity_swap") lc.reduce = SymmetryReduction::parity_swap;
    else lc.reduce = SymmetryReduction::none;
    lc.workers = 1; // sweep parallelism lives at grid-point granularity
    return lc;
}

ResultRow evaluate_observables_point(const SweepConfig& config, double g,
                                     double eta, double j) {
    ModelParams p;
    p.g = g;
    p.eta = eta;
    p.j = j;
    p.n_cut = config.n_cut;
    const GsObservables obs = gs_observables(p, solver_config(config));
    ResultRow r;
    r.g = g;
    r.eta = eta;
    r.n_cut = config.n_cut;
    r.j = j;
    r.e0 = obs.e0;
    r.n_l = obs.n_photon_l;
    r.n_r = obs.n_photon_r;
    r.x2_minus = obs.x2_minus;
    if (obs.truncation_pressure) r.flags |= kRowTruncation;
    if (!obs.converged) r.flags |= kRowNotConverged;
    return r;
}

ResultRow evaluate_fs_point(const SweepConfig& config, double g, double eta,
                            double j) {
    ModelParams p;
    p.g = g;
    p.eta = eta;
    p.j = j;
    p.n_cut = config.n_cut;
    p.validate();
    const LanczosConfig lc = solver_config(config);

    const SparseHamiltonian h_a = build_hamiltonian(p);
    const EigenResult a = ground_state(h_a, lc);
    const GsObservables obs = observables_of_state(p, a);

    ModelParams p_b = p;
    p_b.j = j + config.delta_j;
    LanczosConfig lc_b = lc;
    lc_b.start = &a.vector;
    const SparseHamiltonian h_b = build_hamiltonian(p_b);
    const EigenResult b = ground_state(h_b, lc_b);

    ResultRow r;
    r.g = g;
    r.eta = eta;
    r.n_cut = config.n_cut;
    r.j = j;
    r.e0 = obs.e0;
    r.n_l = obs.n_photon_l;
    r.n_r = obs.n_photon_r;
    r.x2_minus = obs.x2_minus;
    r.fidelity = fidelity(a.vector, b.vector);
    r.chi_f = fs_from_states(a.vector, b.vector, config.delta_j);
    if (obs.truncation_pressure) r.flags |= kRowTruncation;
    if (!a.converged || !b.converged) r.flags |= kRowNotConverged;
    return r;
}

std::string row_key(SweepMode mode, double g, double eta, int n_cut, double j,
                    double delta_j, std::uint64_t seed) {
    std::ostringstream os;
    os << to_string(mode) << "|g=" << g17(g) << "|eta=" << g17(eta) << "|ncut="
       << n_cut << "|j=" << g17(j) << "|dj=" << g17(delta_j) << "|seed=" << seed;
    return os.str();
}

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << "g,eta,ncut,j,e0,n_l,n_r,x2_minus,fidelity,chi_f,flags\n";
    for (const auto& r : rows) {
        os << g17(r.g) << ',' << g17(r.eta) << ',' << r.n_cut << ',' << g17(r.j)
           << ',' << g17(r.e0) << ',' << g17(r.n_l) << ',' << g17(r.n_r) << ','
           << g17(r.x2_minus) << ',' << g17(r.fidelity) << ',' << g17(r.chi_f)
           << ',' << r.flags_text() << '\n';
    }
}

namespace {

nlohmann::json config_to_json(const SweepConfig& c) {
    nlohmann::json j;
    j["mode"] = to_string(c.mode);
    j["g"] = c.g_values;
    j["eta"] = c.eta_values;
    j["j_min"] = c.j_grid.min;
    j["j_max"] = c.j_grid.max;
    j["j_count"] = c.j_grid.count;
    j["ncut"] = c.n_cut;
    j["delta_j"] = c.delta_j;
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    j["restart_dim"] = c.restart_dim;
    j["seed"] = c.seed;
    j["sector"] = c.sector;
    j["reduction"] = c.reduction;
    j["grid_points"] = c.grid_points;
    j["bracket_tol"] = c.bracket_tol;
    j["nu"] = c.nu;
    j["workers"] = c.workers;
    j["out"] = c.out;
    j["checkpoint"] = c.checkpoint;
    j["keep_going"] = c.keep_going;
    return j;
}

SweepConfig config_from_json(const nlohmann::json& j) {
    SweepConfig c;
    c.mode = sweep_mode_from_string(j.at("mode").get<std::string>());
    c.g_values = j.at("g").get<std::vector<double>>();
    c.eta_values = j.at("eta").get<std::vector<double>>();
    c.j_grid.min = j.at("j_min").get<double>();
    c.j_grid.max = j.at("j_max").get<double>();
    c.j_grid.count = j.at("j_count").get<int>();
    c.n_cut = j.at("ncut").get<int>();
    c.delta_j = j.at("delta_j").get<double>();
    c.tol = j.at("tol").get<double>();
    c.max_iter = j.at("max_iter").get<int>();
    c.restart_dim = j.at("restart_dim").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.sector = j.at("sector").get<int>();
    c.reduction = j.at("reduction").get<std::string>();
    c.grid_points = j.at("grid_points").get<int>();
    c.bracket_tol = j.at("bracket_tol").get<double>();
    c.nu = j.at("nu").get<double>();
    c.workers = j.at("workers").get<int>();
    c.out = j.at("out").get<std::string>();
    c.checkpoint = j.at("checkpoint").get<std::string>();
    c.keep_going = j.at("keep_going").get<bool>();
    return c;
}

double json_double(const nlohmann::json& j) {
    return j.is_null() ? kNan : j.get<double>();
}

nlohmann::json row_to_json(const ResultRow& r) {
    nlohmann::json j;
    j["g"] = r.g;
    j["eta"] = r.eta;
    j["ncut"] = r.n_cut;
    j["j"] = r.j;
    j["e0"] = r.e0;
    j["n_l"] = r.n_l;
    j["n_r"] = r.n_r;
    j["x2_minus"] = r.x2_minus;
    j["fidelity"] = r.fidelity;
    j["chi_f"] = r.chi_f;
    j["flags"] = r.flags;
    return j;
}

ResultRow row_from_json(const nlohmann::json& j) {
    ResultRow r;
    r.g = j.at("g").get<double>();
    r.eta = j.at("eta").get<double>();
    r.n_cut = j.at("ncut").get<int>();
    r.j = j.at("j").get<double>();
    r.e0 = json_double(j.at("e0"));
    r.n_l = json_double(j.at("n_l"));
    r.n_r = json_double(j.at("n_r"));
    r.x2_minus = json_double(j.at("x2_minus"));
    r.fidelity = json_double(j.at("fidelity"));
    r.chi_f = json_double(j.at("chi_f"));
    r.flags = j.at("flags").get<unsigned>();
    return r;
}

// Append-only JSONL log: one header line holding the config and its hash,
// then one line per completed grid point.
class Checkpoint {
public:
    Checkpoint() = default;

    static Checkpoint open(const std::string& path, const SweepConfig& config) {
        Checkpoint ck;
        ck.path_ = path;
        if (path.empty()) return ck;
        if (std::filesystem::exists(path)) {
            std::ifstream in(path);
            std::string line;
            if (!std::getline(in, line))
                throw std::runtime_error("checkpoint: empty file: " + path);
            const auto header = nlohmann::json::parse(line);
            const auto stored_hash = header.at("hash").get<std::string>();
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(config.config_hash()));
            if (stored_hash != buf)
                throw std::runtime_error(
                    "checkpoint: config hash mismatch (refusing to mix runs): " + path);
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const auto rec = nlohmann::json::parse(line);
                if (rec.at("kind").get<std::string>() != "row") continue;
                ck.rows_.emplace(rec.at("key").get<std::string>(),
                                 row_from_json(rec.at("row")));
            }
            ck.out_.open(path, std::ios::app);
        } else {
            ck.out_.open(path, std::ios::out);
            if (!ck.out_)
                throw std::runtime_error("checkpoint: cannot create: " + path);
            nlohmann::json header;
            header["kind"] = "header";
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(config.config_hash()));
            header["hash"] = buf;
            header["config"] = config_to_json(config);
            ck.out_ << header.dump() << '\n';
            ck.out_.flush();
        }
        return ck;
    }

    bool active() const { return !path_.empty(); }
    const std::map<std::string, ResultRow>& rows() const { return rows_; }

    void append(const std::string& key, const ResultRow& row) {
        if (!active()) return;
        nlohmann::json rec;
        rec["kind"] = "row";
        rec["key"] = key;
        rec["row"] = row_to_json(row);
        out_ << rec.dump() << '\n';
        out_.flush();
    }

private:
    std::string path_;
    std::ofstream out_;
    std::map<std::string, ResultRow> rows_;
};

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::out | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write: " + tmp);
        os << content;
    }
    std::filesystem::rename(tmp, path);
}

std::vector<double> j_grid_for(const SweepConfig& config, double g) {
    if (config.j_grid.count > 0)
        return linspace(config.j_grid.min, config.j_grid.max, config.j_grid.count);
    const double jc = mean_field(g, 0.0).jc;
    return linspace(0.6 * jc, 1.4 * jc, config.grid_points);
}

std::vector<ResultRow> sorted_rows(const std::map<std::string, ResultRow>& cache) {
    std::vector<ResultRow> rows;
    rows.reserve(cache.size());
    for (const auto& kv : cache) rows.push_back(kv.second);
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.g, a.eta, a.j) < std::tie(b.g, b.eta, b.j);
    });
    return rows;
}

// Shared point sink: keyed cache + checkpoint append behind one mutex.
struct PointSink {
    std::mutex mu;
    std::map<std::string, ResultRow> cache;
    Checkpoint* ckpt{nullptr};

    bool lookup(const std::string& key, ResultRow* row) {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it == cache.end()) return false;
        if (row) *row = it->second;
        return true;
    }
    void store(const std::string& key, const ResultRow& row) {
        std::lock_guard<std::mutex> lock(mu);
        if (!cache.emplace(key, row).second) return; // already recorded
        if (ckpt) ckpt->append(key, row);
    }
};

ResultRow failed_row(const SweepConfig& config, double g, double eta, double j,
                     const char* what) {
    std::fprintf(stderr, "warning: point g=%s eta=%s j=%s failed: %s\n",
                 g17(g).c_str(), g17(eta).c_str(), g17(j).c_str(), what);
    ResultRow r;
    r.g = g;
    r.eta = eta;
    r.n_cut = config.n_cut;
    r.j = j;
    r.flags = kRowFailed;
    return r;
}

// Computes (or replays) one fs point through the sink.
ResultRow sink_fs_point(const SweepConfig& config, PointSink& sink, double g,
                        double eta, double j) {
    const std::string key =
        row_key(config.mode, g, eta, config.n_cut, j, config.delta_j, config.seed);
    ResultRow row;
    if (sink.lookup(key, &row)) return row;
    try {
        row = evaluate_fs_point(config, g, eta, j);
    } catch (const std::exception& e) {
        if (!config.keep_going) throw;
        row = failed_row(config, g, eta, j, e.what());
    }
    sink.store(key, row);
    return row;
}

FsPoint row_to_fs_point(const SweepConfig& config, const ResultRow& row) {
    FsPoint p;
    p.j = row.j;
    p.chi_f = std::isnan(row.chi_f) ? 0.0 : row.chi_f;
    p.delta_j = config.delta_j;
    p.fidelity = row.fidelity;
    p.converged = (row.flags & (kRowNotConverged | kRowFailed)) == 0;
    return p;
}

std::vector<FsCurve> compute_curves(const SweepConfig& config, PointSink& sink,
                                    double g) {
    const double jc = mean_field(g, 0.0).jc;
    double j_lo, j_hi;
    if (config.j_grid.count > 0) {
        j_lo = config.j_grid.min;
        j_hi = config.j_grid.max;
    } else {
        j_lo = 0.6 * jc;
        j_hi = 1.4 * jc;
    }
    std::vector<FsCurve> curves(config.eta_values.size());
    const int outer_workers =
        config.eta_values.size() > 1 ? config.workers : 1;
    PeakSearchOptions opt;
    opt.grid_points = config.grid_points;
    opt.bracket_tol = config.bracket_tol;
    opt.workers = outer_workers > 1 ? 1 : config.workers;
    parallel_for(static_cast<std::int64_t>(config.eta_values.size()),
                 outer_workers, [&](std::int64_t idx) {
                     const double eta =
                         config.eta_values[static_cast<std::size_t>(idx)];
                     const ChiEvaluator eval = [&, eta](double j) {
                         return row_to_fs_point(
                             config, sink_fs_point(config, sink, g, eta, j));
                     };
                     curves[static_cast<std::size_t>(idx)] = locate_peak(
                         g, eta, config.n_cut, config.delta_j, j_lo, j_hi,
                         solver_config(config), opt, eval);
                 });
    return curves;
}

int run_points_mode(const SweepConfig& config, PointSink& sink) {
    struct Task {
        double g, eta, j;
    };
    std::vector<Task> tasks;
    for (double g : config.g_values)
        for (double eta : config.eta_values)
            for (double j : j_grid_for(config, g)) tasks.push_back({g, eta, j});

    parallel_for(static_cast<std::int64_t>(tasks.size()), config.workers,
                 [&](std::int64_t i) {
                     const Task& t = tasks[static_cast<std::size_t>(i)];
                     if (config.mode == SweepMode::fs_scan) {
                         sink_fs_point(config, sink, t.g, t.eta, t.j);
                         return;
                     }
                     const std::string key =
                         row_key(config.mode, t.g, t.eta, config.n_cut, t.j,
                                 config.delta_j, config.seed);
                     if (sink.lookup(key, nullptr)) return;
                     ResultRow row;
                     try {
                         row = evaluate_observables_point(config, t.g, t.eta, t.j);
                     } catch (const std::exception& e) {
                         if (!config.keep_going) throw;
                         row = failed_row(config, t.g, t.eta, t.j, e.what());
                     }
                     sink.store(key, row);
                 });

    std::ostringstream os;
    write_rows_csv(os, sorted_rows(sink.cache));
    write_file_atomic(config.out, os.str());
    return 0;
}

int run_phase_diagram(const SweepConfig& config) {
    std::ostringstream os;
    os << "g,jc\n";
    for (double g : config.g_values)
        os << g17(g) << ',' << g17(mean_field(g, 0.0).jc) << '\n';
    write_file_atomic(config.out, os.str());
    return 0;
}

int run_scaling_mode(const SweepConfig& config, PointSink& sink) {
    std::ostringstream report;
    nlohmann::json js = nlohmann::json::array();
    for (double g : config.g_values) {
        const std::vector<FsCurve> curves = compute_curves(config, sink, g);
        const ScalingReport rep = make_scaling_report(g, curves);
        write_scaling_report(report, rep);
        js.push_back(nlohmann::json::parse(scaling_report_json(rep)));
    }
    write_file_atomic(config.out, report.str());
    write_file_atomic(config.out + ".json", js.dump(2) + "\n");
    std::ostringstream pts;
    write_rows_csv(pts, sorted_rows(sink.cache));
    write_file_atomic(config.out + ".points.csv", pts.str());
    return 0;
}

int run_collapse_mode(const SweepConfig& config, PointSink& sink) {
    std::ostringstream data;
    std::ostringstream report;
    nlohmann::json js = nlohmann::json::array();
    data << "g,eta,u,y\n";
    for (double g : config.g_values) {
        const std::vector<FsCurve> curves = compute_curves(config, sink, g);
        const ScalingReport rep = make_scaling_report(g, curves);
        double nu_used = config.nu > 0.0 ? config.nu : rep.nu;

        // nu scan over [1, 2] in steps of 0.05
        double best_nu = 0.0, best_score = std::numeric_limits<double>::infinity();
        nlohmann::json scan = nlohmann::json::array();
        for (int i = 0; i <= 20; ++i) {
            const double nu = 1.0 + 0.05 * i;
            const double score = collapse_score(curves, nu);
            report << "g=" << g17(g) << " nu=" << g17(nu) << " score="
                   << g17(score) << "\n";
            scan.push_back({{"nu", nu}, {"score", score}});
            if (score < best_score) {
                best_score = score;
                best_nu = nu;
            }
        }
        const double used_score = collapse_score(curves, nu_used);
        report << "g=" << g17(g) << " nu_min=" << g17(best_nu) << " score_min="
               << g17(best_score) << " nu_used=" << g17(nu_used)
               << " score_used=" << g17(used_score) << "\n";

        for (const auto& c : curves) {
            const double scale = std::pow(c.eta, 1.0 / nu_used);
            for (const auto& p : c.points) {
                if (!(p.chi_f > 0.0)) continue;
                data << g17(g) << ',' << g17(c.eta) << ','
                     << g17(scale * (p.j - c.j_max)) << ','
                     << g17((c.chi_max - p.chi_f) / p.chi_f) << '\n';
            }
        }
        nlohmann::json entry = nlohmann::json::parse(scaling_report_json(rep));
        entry["nu_used"] = nu_used;
        entry["score_used"] = used_score;
        entry["nu_min"] = best_nu;
        entry["score_min"] = best_score;
        entry["nu_scan"] = scan;
        js.push_back(entry);
    }
    write_file_atomic(config.out, data.str());
    write_file_atomic(config.out + ".report.txt", report.str());
    write_file_atomic(config.out + ".json", js.dump(2) + "\n");
    std::ostringstream pts;
    write_rows_csv(pts, sorted_rows(sink.cache));
    write_file_atomic(config.out + ".points.csv", pts.str());
    return 0;
}

} // namespace

int run_sweep(const SweepConfig& config_in) {
    SweepConfig config = config_in;
    config.resolve_defaults();
    config.validate();

    if (config.mode == SweepMode::phase_diagram) return run_phase_diagram(config);

    Checkpoint ckpt = Checkpoint::open(config.checkpoint, config);
    PointSink sink;
    sink.cache = ckpt.rows();
    sink.ckpt = &ckpt;

    switch (config.mode) {
        case SweepMode::observables:
        case SweepMode::fs_scan:
            return run_points_mode(config, sink);
        case SweepMode::scaling:
            return run_scaling_mode(config, sink);
        case SweepMode::collapse:
            return run_collapse_mode(config, sink);
        case SweepMode::phase_diagram:
            break; // handled above
    }
    return 1;
}

int resume_sweep(const std::string& checkpoint_path) {
    std::ifstream in(checkpoint_path);
    if (!in) {
        std::fprintf(stderr, "resume: cannot open checkpoint: %s\n",
                     checkpoint_path.c_str());
        return 1;
    }
    std::string line;
    if (!std::getline(in, line)) {
        std::fprintf(stderr, "resume: empty checkpoint: %s\n",
                     checkpoint_path.c_str());
        return 1;
    }
    const auto header = nlohmann::json::parse(line);
    SweepConfig config = config_from_json(header.at("config"));
    config.checkpoint = checkpoint_path;
    return run_sweep(config);
}

} // namespace rabidimer
