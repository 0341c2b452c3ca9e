// bindings.cpp — pybind11 surface over the Rabi-dimer core: model solves,
// observables, fidelity susceptibility, criticality pipeline, sweep driver.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rabidimer/criticality.hpp"
#include "rabidimer/fidelity.hpp"
#include "rabidimer/lanczos.hpp"
#include "rabidimer/model.hpp"
#include "rabidimer/observables.hpp"
#include "rabidimer/sweep.hpp"

namespace py = pybind11;
using namespace rabidimer;

namespace {

ModelParams make_params(double g, double eta, double j, int n_cut) {
    ModelParams p;
    p.g = g;
    p.eta = eta;
    p.j = j;
    p.n_cut = n_cut;
    p.validate();
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rabi-dimer superradiant-transition numerics (C++ core)";

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init(&make_params), py::arg("g"), py::arg("eta"), py::arg("j"),
             py::arg("n_cut"))
        .def_readwrite("g", &ModelParams::g)
        .def_readwrite("eta", &ModelParams::eta)
        .def_readwrite("j", &ModelParams::j)
        .def_readwrite("n_cut", &ModelParams::n_cut)
        .def("validate", &ModelParams::validate)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(g=" + std::to_string(p.g) + ", eta=" +
                   std::to_string(p.eta) + ", j=" + std::to_string(p.j) +
                   ", n_cut=" + std::to_string(p.n_cut) + ")";
        });

    py::enum_<SymmetryReduction>(m, "SymmetryReduction")
        .value("none", SymmetryReduction::none)
        .value("parity", SymmetryReduction::parity)
        .value("parity_swap", SymmetryReduction::parity_swap);

    py::class_<LanczosConfig>(m, "LanczosConfig")
        .def(py::init<>())
        .def_readwrite("max_iter", &LanczosConfig::max_iter)
        .def_readwrite("tol", &LanczosConfig::tol)
        .def_readwrite("reorth", &LanczosConfig::reorth)
        .def_readwrite("seed", &LanczosConfig::seed)
        .def_readwrite("sector", &LanczosConfig::sector)
        .def_readwrite("reduce", &LanczosConfig::reduce)
        .def_readwrite("swap_sector", &LanczosConfig::swap_sector)
        .def_readwrite("restart_dim", &LanczosConfig::restart_dim)
        .def_readwrite("keep_ritz", &LanczosConfig::keep_ritz)
        .def_readwrite("workers", &LanczosConfig::workers);

    py::class_<EigenResult>(m, "EigenResult")
        .def_readonly("value", &EigenResult::value)
        .def_readonly("vector", &EigenResult::vector)
        .def_readonly("residual", &EigenResult::residual)
        .def_readonly("iterations", &EigenResult::iterations)
        .def_readonly("converged", &EigenResult::converged)
        .def_readonly("degenerate", &EigenResult::degenerate);

    m.def(
        "ground_state",
        [](const ModelParams& p, const LanczosConfig& cfg) {
            p.validate();
            return ground_state(build_hamiltonian(p), cfg);
        },
        py::arg("params"), py::arg("config") = LanczosConfig{},
        py::call_guard<py::gil_scoped_release>(),
        "Lowest eigenpair of H(params).");

    m.def(
        "lowest_k",
        [](const ModelParams& p, int k, const LanczosConfig& cfg) {
            p.validate();
            return lowest_k_lanczos(build_hamiltonian(p), k, cfg);
        },
        py::arg("params"), py::arg("k"), py::arg("config") = LanczosConfig{},
        py::call_guard<py::gil_scoped_release>(),
        "Lowest k eigenpairs via thick-restart Lanczos.");

    m.def(
        "lowest_k_dense",
        [](const ModelParams& p, int k) {
            p.validate();
            return lowest_k_dense(build_hamiltonian(p), k);
        },
        py::arg("params"), py::arg("k"),
        py::call_guard<py::gil_scoped_release>(),
        "Dense-diagonalization oracle (dim <= 4096).");

    py::class_<GsObservables>(m, "GsObservables")
        .def_readonly("params", &GsObservables::params)
        .def_readonly("e0", &GsObservables::e0)
        .def_readonly("n_photon_l", &GsObservables::n_photon_l)
        .def_readonly("n_photon_r", &GsObservables::n_photon_r)
        .def_readonly("x2_minus", &GsObservables::x2_minus)
        .def_readonly("x2_plus", &GsObservables::x2_plus)
        .def_readonly("residual", &GsObservables::residual)
        .def_readonly("iterations", &GsObservables::iterations)
        .def_readonly("converged", &GsObservables::converged)
        .def_readonly("truncation_pressure", &GsObservables::truncation_pressure);

    m.def("gs_observables", &gs_observables, py::arg("params"),
          py::arg("config") = LanczosConfig{},
          py::call_guard<py::gil_scoped_release>(),
          "Ground-state energy, photon populations, <x_-^2>.");

    m.def("observables_of_state", &observables_of_state, py::arg("params"),
          py::arg("ground"), "Observable bundle from an existing solve.");

    py::class_<FsPoint>(m, "FsPoint")
        .def(py::init<>())
        .def_readwrite("j", &FsPoint::j)
        .def_readwrite("chi_f", &FsPoint::chi_f)
        .def_readwrite("delta_j", &FsPoint::delta_j)
        .def_readwrite("fidelity", &FsPoint::fidelity)
        .def_readwrite("converged", &FsPoint::converged);

    m.def("fidelity", &fidelity, py::arg("psi_a"), py::arg("psi_b"),
          "|<a|b>| of two state vectors.");
    m.def("fs_from_states", &fs_from_states, py::arg("psi_a"), py::arg("psi_b"),
          py::arg("delta_j"), "chi_F from two unit ground states.");

    m.def("fidelity_susceptibility", &fidelity_susceptibility, py::arg("params"),
          py::arg("delta_j"), py::arg("config") = LanczosConfig{},
          py::arg("direction") = +1,
          py::call_guard<py::gil_scoped_release>(),
          "Finite-difference chi_F at params.j.");

    m.def(
        "fs_perturbative",
        [](const ModelParams& p, int k_states, const LanczosConfig& cfg) {
            int excluded = 0;
            double chi;
            {
                py::gil_scoped_release release;
                chi = fs_perturbative(p, k_states, cfg, &excluded);
            }
            return py::make_tuple(chi, excluded);
        },
        py::arg("params"), py::arg("k_states"),
        py::arg("config") = LanczosConfig{},
        "Perturbative chi_F oracle; returns (chi, excluded_degenerate).");

    py::class_<MeanFieldResult>(m, "MeanFieldResult")
        .def_readonly("g", &MeanFieldResult::g)
        .def_readonly("j", &MeanFieldResult::j)
        .def_readonly("jc", &MeanFieldResult::jc)
        .def_readonly("lambda_plus", &MeanFieldResult::lambda_plus)
        .def_readonly("lambda_minus", &MeanFieldResult::lambda_minus)
        .def("e_minus", &MeanFieldResult::e_minus, py::arg("x_l"), py::arg("x_r"))
        .def("e_plus", &MeanFieldResult::e_plus, py::arg("x_l"), py::arg("x_r"));

    m.def("mean_field", &mean_field, py::arg("g"), py::arg("j"),
          "Mean-field boundary jc=(1-g^2)/2 and normal-mode curvatures.");

    py::class_<FsCurve>(m, "FsCurve")
        .def(py::init<>())
        .def_readwrite("g", &FsCurve::g)
        .def_readwrite("eta", &FsCurve::eta)
        .def_readwrite("n_cut", &FsCurve::n_cut)
        .def_readwrite("delta_j", &FsCurve::delta_j)
        .def_readwrite("points", &FsCurve::points)
        .def_readwrite("j_max", &FsCurve::j_max)
        .def_readwrite("chi_max", &FsCurve::chi_max)
        .def_readwrite("flags", &FsCurve::flags);

    py::class_<PeakSearchOptions>(m, "PeakSearchOptions")
        .def(py::init<>())
        .def_readwrite("grid_points", &PeakSearchOptions::grid_points)
        .def_readwrite("bracket_tol", &PeakSearchOptions::bracket_tol)
        .def_readwrite("max_widen", &PeakSearchOptions::max_widen)
        .def_readwrite("workers", &PeakSearchOptions::workers);

    m.def("locate_peak", &locate_peak, py::arg("g"), py::arg("eta"),
          py::arg("n_cut"), py::arg("delta_j"), py::arg("j_lo") = 0.0,
          py::arg("j_hi") = 0.0, py::arg("config") = LanczosConfig{},
          py::arg("options") = PeakSearchOptions{},
          py::arg("evaluator") = ChiEvaluator{},
          "chi_F(J) peak search; j_lo == j_hi auto-windows to [0.6,1.4]*jc.");

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("value", &FitResult::value)
        .def_readonly("stderr", &FitResult::stderr_);

    m.def("fit_mu", &fit_mu, py::arg("eta_chi"),
          "OLS slope of ln(chi_max) on ln(eta).");
    m.def("collapse_score", &collapse_score, py::arg("curves"), py::arg("nu"),
          "RMS cross-curve spread of the rescaled curves; lower = better.");

    py::class_<ScalingReport>(m, "ScalingReport")
        .def_readonly("g", &ScalingReport::g)
        .def_readonly("etas", &ScalingReport::etas)
        .def_readonly("j_max_per_eta", &ScalingReport::j_max_per_eta)
        .def_readonly("chi_max_per_eta", &ScalingReport::chi_max_per_eta)
        .def_readonly("mu", &ScalingReport::mu)
        .def_readonly("mu_stderr", &ScalingReport::mu_stderr)
        .def_readonly("nu", &ScalingReport::nu)
        .def_readonly("nu_stderr", &ScalingReport::nu_stderr)
        .def_readonly("collapse_score_at_nu", &ScalingReport::collapse_score_at_nu)
        .def_readonly("flags", &ScalingReport::flags);

    m.def("make_scaling_report", &make_scaling_report, py::arg("g"),
          py::arg("curves"), "mu fit plus collapse score at nu=2/mu.");
    m.def("scaling_report_json", &scaling_report_json, py::arg("report"));

    py::enum_<SweepMode>(m, "SweepMode")
        .value("observables", SweepMode::observables)
        .value("fs_scan", SweepMode::fs_scan)
        .value("scaling", SweepMode::scaling)
        .value("collapse", SweepMode::collapse)
        .value("phase_diagram", SweepMode::phase_diagram);

    py::class_<JGrid>(m, "JGrid")
        .def(py::init<>())
        .def(py::init([](double min, double max, int count) {
                 JGrid g;
                 g.min = min;
                 g.max = max;
                 g.count = count;
                 return g;
             }),
             py::arg("min"), py::arg("max"), py::arg("count"))
        .def_readwrite("min", &JGrid::min)
        .def_readwrite("max", &JGrid::max)
        .def_readwrite("count", &JGrid::count);

    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("mode", &SweepConfig::mode)
        .def_readwrite("g_values", &SweepConfig::g_values)
        .def_readwrite("eta_values", &SweepConfig::eta_values)
        .def_readwrite("j_grid", &SweepConfig::j_grid)
        .def_readwrite("n_cut", &SweepConfig::n_cut)
        .def_readwrite("delta_j", &SweepConfig::delta_j)
        .def_readwrite("tol", &SweepConfig::tol)
        .def_readwrite("max_iter", &SweepConfig::max_iter)
        .def_readwrite("restart_dim", &SweepConfig::restart_dim)
        .def_readwrite("seed", &SweepConfig::seed)
        .def_readwrite("sector", &SweepConfig::sector)
        .def_readwrite("reduction", &SweepConfig::reduction)
        .def_readwrite("grid_points", &SweepConfig::grid_points)
        .def_readwrite("bracket_tol", &SweepConfig::bracket_tol)
        .def_readwrite("nu", &SweepConfig::nu)
        .def_readwrite("workers", &SweepConfig::workers)
        .def_readwrite("out", &SweepConfig::out)
        .def_readwrite("checkpoint", &SweepConfig::checkpoint)
        .def_readwrite("keep_going", &SweepConfig::keep_going)
        .def("config_hash", &SweepConfig::config_hash);

    m.def("run_sweep", &run_sweep, py::arg("config"),
          py::call_guard<py::gil_scoped_release>(),
          "Execute the configured sweep; returns the exit status.");
    m.def("resume_sweep", &resume_sweep, py::arg("checkpoint_path"),
          py::call_guard<py::gil_scoped_release>(),
          "Continue the run recorded in a checkpoint.");
}
