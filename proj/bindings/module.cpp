#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "specflow/action.hpp"
#include "specflow/characteristics.hpp"
#include "specflow/chiral_flow.hpp"
#include "specflow/circular_jacobi.hpp"
#include "specflow/errors.hpp"
#include "specflow/gaussian_flow.hpp"
#include "specflow/io.hpp"
#include "specflow/mc_oracle.hpp"
#include "specflow/measures.hpp"
#include "specflow/scenario.hpp"

namespace py = pybind11;
using namespace specflow;

namespace {

SpectralMeasure measure_from_json_str(const std::string& text) {
    return measure_from_json(Json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "hydrodynamic spectral evolution for additively perturbed random matrix ensembles";

    static py::exception<Error> exc(m, "SpecflowError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            exc(e.what());
        }
    });

    py::enum_<Domain>(m, "Domain")
        .value("real_line", Domain::real_line)
        .value("positive_halfline", Domain::positive_halfline)
        .value("circle", Domain::circle);

    py::enum_<Symmetry>(m, "Symmetry").value("even", Symmetry::even).value("none", Symmetry::none);

    py::class_<Atom>(m, "Atom")
        .def(py::init<double, double>())
        .def_readwrite("location", &Atom::location)
        .def_readwrite("weight", &Atom::weight);

    py::class_<SpectralMeasure>(m, "SpectralMeasure")
        .def(py::init<>())
        .def_readwrite("atoms", &SpectralMeasure::atoms)
        .def_readwrite("ac_grid", &SpectralMeasure::ac_grid)
        .def_readwrite("ac_values", &SpectralMeasure::ac_values)
        .def_readwrite("symmetry", &SpectralMeasure::symmetry)
        .def_readwrite("domain", &SpectralMeasure::domain)
        .def_readwrite("total_mass", &SpectralMeasure::total_mass)
        .def("validate", &SpectralMeasure::validate)
        .def_static("delta", &SpectralMeasure::delta, py::arg("x"),
                    py::arg("domain") = Domain::real_line)
        .def_static("symmetric_pair", &SpectralMeasure::symmetric_pair)
        .def_static("chiral_pair", &SpectralMeasure::chiral_pair)
        .def_static("uniform", &SpectralMeasure::uniform, py::arg("a"), py::arg("b"),
                    py::arg("n") = 801, py::arg("mass") = 1.0,
                    py::arg("domain") = Domain::real_line)
        .def_static("from_json", &measure_from_json_str);

    py::class_<DensityCurve>(m, "DensityCurve")
        .def(py::init<>())
        .def_readwrite("grid", &DensityCurve::grid)
        .def_readwrite("values", &DensityCurve::values)
        .def_readwrite("tau_hat", &DensityCurve::tau_hat)
        .def("mass", &DensityCurve::mass)
        .def("value_at", &DensityCurve::value_at);

    py::class_<GreenEvaluation>(m, "GreenEvaluation")
        .def_readonly("z", &GreenEvaluation::z)
        .def_readonly("g", &GreenEvaluation::g)
        .def_readonly("residual", &GreenEvaluation::residual)
        .def_readonly("branch_ok", &GreenEvaluation::branch_ok);

    py::class_<GaussianFlowSpec>(m, "GaussianFlowSpec")
        .def(py::init<SpectralMeasure, double>(), py::arg("initial"), py::arg("tau_hat"))
        .def_readwrite("initial", &GaussianFlowSpec::initial)
        .def_readwrite("tau_hat", &GaussianFlowSpec::tau_hat);

    py::class_<ChiralFlowSpec>(m, "ChiralFlowSpec")
        .def(py::init<SpectralMeasure, double, double>(), py::arg("initial"), py::arg("tau_hat"),
             py::arg("a_hat") = 0.0)
        .def_readwrite("initial", &ChiralFlowSpec::initial)
        .def_readwrite("tau_hat", &ChiralFlowSpec::tau_hat)
        .def_readwrite("a_hat", &ChiralFlowSpec::a_hat);

    py::class_<CircularFlowSpec>(m, "CircularFlowSpec")
        .def(py::init<SpectralMeasure, double>(), py::arg("initial"), py::arg("tau_hat"))
        .def_readwrite("initial", &CircularFlowSpec::initial)
        .def_readwrite("tau_hat", &CircularFlowSpec::tau_hat);

    py::class_<JacobiFlowSpec>(m, "JacobiFlowSpec")
        .def(py::init<SpectralMeasure, double, double>(), py::arg("initial"), py::arg("tau_hat"),
             py::arg("a_hat") = 0.0)
        .def_readwrite("initial", &JacobiFlowSpec::initial)
        .def_readwrite("tau_hat", &JacobiFlowSpec::tau_hat)
        .def_readwrite("a_hat", &JacobiFlowSpec::a_hat);

    m.def("green_of_measure", &green_of_measure);
    m.def("hilbert_transform", &hilbert_transform);
    m.def("default_eps_ladder", &default_eps_ladder);
    m.def(
        "stieltjes_invert",
        [](const std::function<Complex(Complex)>& f, const std::vector<double>& grid,
           const std::vector<double>& ladder) { return stieltjes_invert(f, grid, ladder); },
        py::arg("green_at"), py::arg("x_grid"), py::arg("eps_ladder"));
    m.def("moments", &moments);
    m.def("support_detect", [](const DensityCurve& c, double thr) {
        std::vector<std::pair<double, double>> out;
        for (const auto& iv : support_detect(c, thr)) out.emplace_back(iv.lo, iv.hi);
        return out;
    });
    m.def("linspace", &linspace);
    m.def("refined_grid", [](double lo, double hi, std::size_t n, const std::vector<double>& e) {
        return refined_grid(lo, hi, n, e);
    });
    m.def("graded_grid", &graded_grid);

    m.def(
        "evolve_green",
        [](const GaussianFlowSpec& s, Complex z) { return evolve_green(s, z); }, py::arg("spec"),
        py::arg("z"));
    m.def(
        "evolve_density",
        [](const GaussianFlowSpec& s, const std::vector<double>& grid) {
            return evolve_density(s, grid);
        },
        py::arg("spec"), py::arg("grid"));
    m.def("wigner_semicircle", &wigner_semicircle);
    m.def("two_delta_merged_density", &two_delta_merged_density);

    m.def(
        "evolve_green_chiral",
        [](const ChiralFlowSpec& s, Complex z) { return evolve_green_chiral(s, z); },
        py::arg("spec"), py::arg("z"));
    m.def("chiral_block_green", &chiral_block_green);
    m.def(
        "wishart_green", [](const ChiralFlowSpec& s, Complex z) { return wishart_green(s, z); },
        py::arg("spec"), py::arg("zW"));
    m.def(
        "chiral_density",
        [](const ChiralFlowSpec& s, const std::vector<double>& grid) {
            return chiral_density(s, grid);
        },
        py::arg("spec"), py::arg("grid"));
    m.def(
        "wishart_density",
        [](const ChiralFlowSpec& s, const std::vector<double>& grid) {
            return wishart_density(s, grid);
        },
        py::arg("spec"), py::arg("grid"));
    m.def("chiral_semicircle", &chiral_semicircle);
    m.def("marchenko_pastur", &marchenko_pastur);
    m.def("quartic_law", &quartic_law);
    m.def("raney_density", &raney_density);
    m.def("raney_number", &raney_number);

    m.def(
        "circular_green",
        [](const CircularFlowSpec& s, Complex z) { return circular_green(s, z); },
        py::arg("spec"), py::arg("z"));
    m.def(
        "circular_density",
        [](const CircularFlowSpec& s, const std::vector<double>& grid) {
            return circular_density(s, grid);
        },
        py::arg("spec"), py::arg("phi_grid"));
    m.def("jacobi_green", &jacobi_green);
    m.def(
        "jacobi_density",
        [](const JacobiFlowSpec& s, const std::vector<double>& grid) {
            return jacobi_density(s, grid);
        },
        py::arg("spec"), py::arg("phi_grid"));

    py::class_<EmpiricalSpectrum>(m, "EmpiricalSpectrum")
        .def_readonly("values", &EmpiricalSpectrum::values)
        .def_readonly("n_dim", &EmpiricalSpectrum::n_dim)
        .def_readonly("m_dim", &EmpiricalSpectrum::m_dim)
        .def_readonly("beta", &EmpiricalSpectrum::beta)
        .def_readonly("tau_hat", &EmpiricalSpectrum::tau_hat)
        .def_readonly("seed", &EmpiricalSpectrum::seed)
        .def_readonly("trials", &EmpiricalSpectrum::trials)
        .def_readonly("by_trial", &EmpiricalSpectrum::by_trial);

    py::class_<Histogram>(m, "Histogram")
        .def(py::init<>())
        .def_readwrite("bin_edges", &Histogram::bin_edges)
        .def_readwrite("masses", &Histogram::masses);

    m.def("sample_gaussian_flow", &sample_gaussian_flow, py::arg("N"), py::arg("spec"),
          py::arg("beta"), py::arg("trials"), py::arg("seed"));
    m.def("sample_chiral_flow", &sample_chiral_flow, py::arg("m"), py::arg("n"), py::arg("spec"),
          py::arg("beta"), py::arg("trials"), py::arg("seed"));
    m.def("sample_circular_flow", &sample_circular_flow, py::arg("N"), py::arg("steps"),
          py::arg("tau_hat"), py::arg("trials"), py::arg("seed"));
    m.def("empirical_histogram", &empirical_histogram);
    m.def("wasserstein1",
          py::overload_cast<const Histogram&, const DensityCurve&>(&wasserstein1));
    m.def("wasserstein1_hist",
          py::overload_cast<const Histogram&, const Histogram&>(&wasserstein1));
    m.def("wasserstein1_spectrum",
          py::overload_cast<const EmpiricalSpectrum&, const DensityCurve&>(&wasserstein1));

    py::class_<Trajectory>(m, "Trajectory")
        .def(py::init<>())
        .def_readwrite("time_grid", &Trajectory::time_grid)
        .def_readwrite("space_grid", &Trajectory::space_grid)
        .def_readwrite("rho", &Trajectory::rho)
        .def_readwrite("v", &Trajectory::v);

    m.def("gaussian_action", &gaussian_action);
    m.def("chiral_action", &chiral_action);
    m.def("hilbert_identity_check", &hilbert_identity_check);

    m.def("run_scenario", [](const std::string& scenario_json, const std::string& out_dir) {
        Scenario sc = Scenario::from_json(Json::parse(scenario_json));
        return run_scenario(sc, out_dir).dump();
    });
}
