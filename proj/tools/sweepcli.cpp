// sweepcli — command-line front end for the Rabi-dimer sweep engine.
//
// Subcommands: observables, fs-scan, scaling, collapse, phase-diagram, resume.
// Value lists accept single numbers, comma lists, and a:b:step ranges;
// --j-grid takes min:max:count. A flat key=value config file can seed any
// subcommand via --config; explicit flags override it.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rabidimer/sweep.hpp"

namespace {

using rabidimer::SweepConfig;
using rabidimer::SweepMode;

// "0.5", "0.5,0.7", "1100:1500:100" (inclusive of the endpoint up to a half
// step of slack).
std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string tok = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (tok.empty()) continue;
        const std::size_t c1 = tok.find(':');
        if (c1 == std::string::npos) {
            out.push_back(std::stod(tok));
            continue;
        }
        const std::size_t c2 = tok.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw CLI::ValidationError("ranges use the form first:last:step");
        const double first = std::stod(tok.substr(0, c1));
        const double last = std::stod(tok.substr(c1 + 1, c2 - c1 - 1));
        const double step = std::stod(tok.substr(c2 + 1));
        if (!(step > 0.0) || last < first)
            throw CLI::ValidationError("range must satisfy first <= last, step > 0");
        for (int i = 0;; ++i) {
            const double v = first + step * i;
            if (v > last + 0.5 * step) break;
            out.push_back(v < last ? v : last);
            if (v >= last) break;
        }
    }
    return out;
}

rabidimer::JGrid parse_j_grid(const std::string& text) {
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw CLI::ValidationError("--j-grid uses the form min:max:count");
    rabidimer::JGrid g;
    g.min = std::stod(text.substr(0, c1));
    g.max = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    g.count = std::stoi(text.substr(c2 + 1));
    if (g.count < 1) throw CLI::ValidationError("--j-grid count must be >= 1");
    return g;
}

struct RawArgs {
    std::string config;
    std::string g;
    std::string eta;
    std::string j_grid;
};

// Flat key=value lines; '#'/';' comments. Keys mirror the long flags
// ('-' and '_' interchangeable). Values fill only options the command
// line left untouched, so explicit flags always win.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    const auto strip = [](const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = strip(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ':' + std::to_string(lineno) +
                                     ": expected key=value");
        const std::string key = strip(s.substr(0, eq));
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        CLI::Option* opt = cmd->get_option_no_throw("--" + flag);
        if (opt == nullptr)
            throw std::runtime_error(path + ':' + std::to_string(lineno) +
                                     ": unknown config key '" + key + "'");
        if (opt->count() > 0) continue;
        opt->add_result(strip(s.substr(eq + 1)));
        opt->run_callback();
    }
}

void add_common_options(CLI::App* cmd, SweepConfig& cfg, RawArgs& raw) {
    cmd->add_option("--config", raw.config,
                    "flat key=value config file; flags override it");
    cmd->add_option("--g", raw.g, "g values (list or first:last:step)");
    cmd->add_option("--eta", raw.eta, "eta values (list or first:last:step)");
    cmd->add_option("--j-grid", raw.j_grid,
                    "explicit J grid min:max:count (default: auto window "
                    "[0.6,1.4]*jc(g))");
    cmd->add_option("--ncut", cfg.n_cut, "Fock states kept per cavity")
        ->capture_default_str();
    cmd->add_option("--delta-j", cfg.delta_j,
                    "finite-difference step (default 5e-5; 1e-5 for "
                    "scaling/collapse)");
    cmd->add_option("--tol", cfg.tol, "eigensolver residual tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iter", cfg.max_iter, "eigensolver iteration cap")
        ->capture_default_str();
    cmd->add_option("--restart-dim", cfg.restart_dim, "Lanczos restart subspace size")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "deterministic start-vector seed")
        ->capture_default_str();
    cmd->add_option("--sector", cfg.sector, "parity sector restriction (-1, 0, +1)")
        ->capture_default_str();
    cmd->add_option("--reduce", cfg.reduction,
                    "symmetry compression: none|parity|parity_swap")
        ->capture_default_str();
    cmd->add_option("--grid-points", cfg.grid_points, "points in coarse scans")
        ->capture_default_str();
    cmd->add_option("--bracket-tol", cfg.bracket_tol, "peak refinement bracket width")
        ->capture_default_str();
    cmd->add_option("--nu", cfg.nu, "rescaling exponent used by collapse mode")
        ->capture_default_str();
    cmd->add_option("--workers", cfg.workers, "parallel grid-point workers")
        ->capture_default_str();
    cmd->add_option("--out", cfg.out, "primary output artifact path");
    cmd->add_option("--checkpoint", cfg.checkpoint, "append-only JSONL checkpoint");
    cmd->add_flag("--keep-going", cfg.keep_going,
                  "record failed points in flags instead of aborting");
}

int run_mode(CLI::App* cmd, SweepMode mode, SweepConfig& cfg, RawArgs& raw) {
    apply_config_file(cmd, raw.config);
    cfg.mode = mode;
    cfg.g_values = parse_values(raw.g);
    if (!raw.eta.empty()) cfg.eta_values = parse_values(raw.eta);
    if (!raw.j_grid.empty()) cfg.j_grid = parse_j_grid(raw.j_grid);
    return rabidimer::run_sweep(cfg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rabi-dimer superradiant-transition sweep tool"};
    app.require_subcommand(1);

    struct ModeCmd {
        SweepMode mode;
        SweepConfig cfg;
        RawArgs raw;
        CLI::App* cmd;
    };
    std::vector<ModeCmd> cmds;
    cmds.push_back({SweepMode::observables, {}, {},
                    app.add_subcommand("observables",
                                       "ground-state diagnostics over a (g, eta, J) grid")});
    cmds.push_back({SweepMode::fs_scan, {}, {},
                    app.add_subcommand("fs-scan",
                                       "fidelity-susceptibility curves over a J grid")});
    cmds.push_back({SweepMode::scaling, {}, {},
                    app.add_subcommand("scaling",
                                       "chi_F peak per eta, then the mu exponent fit")});
    cmds.push_back({SweepMode::collapse, {}, {},
                    app.add_subcommand("collapse",
                                       "rescaled-curve data collapse and nu scan")});
    cmds.push_back({SweepMode::phase_diagram, {}, {},
                    app.add_subcommand("phase-diagram",
                                       "analytic critical boundary J_c(g)")});
    for (auto& m : cmds) {
        if (m.mode == SweepMode::phase_diagram) {
            m.cmd->add_option("--config", m.raw.config,
                              "flat key=value config file; flags override it");
            m.cmd->add_option("--g", m.raw.g, "g values (list or first:last:step)");
            m.cmd->add_option("--out", m.cfg.out, "output CSV path");
        } else {
            add_common_options(m.cmd, m.cfg, m.raw);
        }
    }

    std::string resume_path;
    CLI::App* resume_cmd =
        app.add_subcommand("resume", "continue the run recorded in a checkpoint");
    resume_cmd->add_option("--checkpoint", resume_path, "checkpoint to continue")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (resume_cmd->parsed()) return rabidimer::resume_sweep(resume_path);
        for (auto& m : cmds)
            if (m.cmd->parsed()) return run_mode(m.cmd, m.mode, m.cfg, m.raw);
        std::fprintf(stderr, "no subcommand selected\n");
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
