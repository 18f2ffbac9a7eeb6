#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbm/analysis.hpp"
#include "qbm/basis.hpp"
#include "qbm/error.hpp"
#include "qbm/meanfield.hpp"
#include "qbm/runner.hpp"
#include "qbm/simulation.hpp"

namespace py = pybind11;
using namespace qbm;

namespace {

SystemSpec make_spec(double coupling, const std::string& symmetry, int dimension, double softening, double exponent) {
    SystemSpec s;
    s.coupling = coupling;
    s.symmetry = symmetry_from_string(symmetry);
    s.dimension = dimension;
    s.softening = softening;
    s.interaction_exponent = exponent;
    s.validate();
    return s;
}

py::dict series_dict(const TimeSeries& ts) {
    py::dict d;
    d["t"] = ts.times;
    for (std::size_t i = 0; i < ts.names.size(); ++i) d[py::str(ts.names[i])] = ts.values[i];
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "breathing modes of two trapped particles";

    static py::exception<Error> error(m, "QbmError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error;
            exc.attr("kind") = to_string(e.kind());
            PyErr_SetString(error.ptr(), e.what());
        }
    });

    py::class_<SystemSpec>(m, "SystemSpec")
        .def(py::init(&make_spec), py::arg("coupling") = 0.0, py::arg("symmetry") = "antisymmetric",
             py::arg("dimension") = 1, py::arg("softening") = 0.0, py::arg("exponent") = 1.0)
        .def_readwrite("coupling", &SystemSpec::coupling)
        .def_readwrite("dimension", &SystemSpec::dimension)
        .def_readwrite("softening", &SystemSpec::softening)
        .def_readwrite("exponent", &SystemSpec::interaction_exponent)
        .def_property("symmetry", [](const SystemSpec& s) { return std::string(to_string(s.symmetry)); },
                      [](SystemSpec& s, const std::string& v) { s.symmetry = symmetry_from_string(v); })
        .def("__repr__", [](const SystemSpec& s) {
            return "SystemSpec(coupling=" + std::to_string(s.coupling) + ", symmetry='" + to_string(s.symmetry) +
                   "', dimension=" + std::to_string(s.dimension) + ", softening=" + std::to_string(s.softening) + ")";
        });

    m.def("sector_gap", [](const SystemSpec& s, int size) {
        const SectorGap g = sector_gap(s, size);
        return py::dict(py::arg("ground") = g.ground, py::arg("excited") = g.excited, py::arg("gap") = g.gap,
                        py::arg("mapped") = g.mapped);
    }, py::arg("spec"), py::arg("size") = 200, "in-sector gap E2 - E0 of the relative Hamiltonian");

    py::class_<TwoModeFit>(m, "TwoModeFit")
        .def_readonly("a", &TwoModeFit::a)
        .def_readonly("b", &TwoModeFit::b)
        .def_readonly("omega_r", &TwoModeFit::omega_r)
        .def_readonly("omega_R", &TwoModeFit::omega_R)
        .def_readonly("offset", &TwoModeFit::offset)
        .def_readonly("residual_rms", &TwoModeFit::residual_rms)
        .def_readonly("merged", &TwoModeFit::merged)
        .def_readonly("converged", &TwoModeFit::converged)
        .def("__call__", &TwoModeFit::operator());

    m.def("fit_two_modes", [](const std::vector<double>& t, const std::vector<double>& y) { return fit_two_modes(t, y); },
          py::arg("times"), py::arg("values"));

    m.def("simulate", [](const SystemSpec& s, const std::string& method, const std::string& excitation,
                         double frequency, double run_length) {
        SimulationConfig c;
        c.spec = s;
        c.solver.method = method_from_string(method);
        if (excitation == "switch_off") c.protocol = SwitchOff{};
        else if (excitation == "modulation") c.protocol = Modulation{5e-3, 240.0, 100.0, frequency};
        else throw Error(ErrorKind::Config, "excitation must be 'switch_off' or 'modulation'");
        c.run_length = run_length;
        SimulationResult r;
        TwoModeFit f;
        {
            py::gil_scoped_release release;
            r = simulate(c);
            if (excitation == "switch_off") f = fit_breathing_modes(r, c.protocol);
        }
        py::dict d;
        d["series"] = series_dict(r.series);
        d["ground_energy"] = r.ground_energy;
        d["mapped"] = r.mapped;
        d["norm_drift"] = r.norm_drift;
        d["max_leakage"] = r.max_leakage;
        d["warnings"] = r.warnings;
        if (excitation == "switch_off") d["fit"] = f;
        return d;
    }, py::arg("spec"), py::arg("method") = "basis", py::arg("excitation") = "switch_off", py::arg("frequency") = 2.0,
       py::arg("run_length") = 0.0);

    py::class_<FitFormulaParams>(m, "FitFormulaParams")
        .def(py::init([](double b, double c) { return FitFormulaParams{b, c}; }), py::arg("b") = 1.0, py::arg("c") = 0.0)
        .def_readwrite("b", &FitFormulaParams::b)
        .def_readwrite("c", &FitFormulaParams::c)
        .def("__call__", [](const FitFormulaParams& p, double l) { return eval_fit_formula(p, l); });
    m.def("eval_fit_formula", &eval_fit_formula, py::arg("params"), py::arg("coupling"));
    m.def("fit_formula_calibrate", [](const std::vector<double>& l, const std::vector<double>& w) {
        const FitFormulaCalibration c = fit_formula_calibrate(l, w);
        return py::make_tuple(c.params, c.max_deviation);
    }, py::arg("couplings"), py::arg("omegas"));

    m.def("hartree_frequency", [](const SystemSpec& s) { return hartree_frequency(s).omega_r; }, py::arg("spec"));
    m.def("semiclassical_frequency", [](const SystemSpec& s) { return semiclassical_frequency(s).omega_r; },
          py::arg("spec"));

    m.def("run_config", [](const std::string& json_text) {
        const RunConfig c = parse_run_config(json_text);
        RunRecord r;
        {
            py::gil_scoped_release release;
            r = run_single(c);
        }
        return summary_json(r, c);
    }, py::arg("json_text"), "run one configuration and return its summary JSON");
    m.def("config_hash", [](const std::string& json_text) { return config_hash(parse_run_config(json_text)); });
}
