#include "bates/errors.hpp"
#include "bates/harness.hpp"
#include "bates/spectrum.hpp"
#include "bates/stability.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace bates;
namespace st = bates::stability;

PYBIND11_MODULE(bates_adi, m) {
    m.doc() = "ADI time stepping for the Bates PIDE";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<PoleError>(m, "PoleError", PyExc_ArithmeticError);

    py::class_<BatesParams>(m, "BatesParams")
        .def(py::init<>())
        .def_readwrite("kappa", &BatesParams::kappa)
        .def_readwrite("eta", &BatesParams::eta)
        .def_readwrite("sigma", &BatesParams::sigma)
        .def_readwrite("rho", &BatesParams::rho)
        .def_readwrite("r", &BatesParams::r)
        .def_readwrite("lambda_", &BatesParams::lambda)
        .def_readwrite("gamma", &BatesParams::gamma)
        .def_readwrite("delta", &BatesParams::delta)
        .def_readwrite("T", &BatesParams::T)
        .def_readwrite("K", &BatesParams::K)
        .def("feller_satisfied", &BatesParams::feller_satisfied);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](std::size_t m1, std::size_t m2) { return GridSpec{m1, m2}; }), py::arg("m1") = 200,
             py::arg("m2") = 100)
        .def_readwrite("m1", &GridSpec::m1)
        .def_readwrite("m2", &GridSpec::m2)
        .def_readwrite("smax_mult", &GridSpec::smax_mult)
        .def_readwrite("vmax", &GridSpec::vmax)
        .def_readwrite("stretch_s", &GridSpec::stretch_s)
        .def_readwrite("stretch_v", &GridSpec::stretch_v);

    py::class_<SpatialGrid>(m, "SpatialGrid")
        .def_readonly("s", &SpatialGrid::s)
        .def_readonly("v", &SpatialGrid::v)
        .def_readonly("strike_index", &SpatialGrid::strike_index)
        .def("size", &SpatialGrid::size);

    py::class_<CaseConfig>(m, "CaseConfig")
        .def_readwrite("name", &CaseConfig::name)
        .def_readwrite("params", &CaseConfig::params)
        .def_readwrite("grid", &CaseConfig::grid)
        .def("stiff_jumps", &CaseConfig::stiff_jumps);

    m.def("load_case", &load_case, py::arg("name"));
    m.def("case_names", &case_names);
    m.def("build_grid", &build_grid, py::arg("params"), py::arg("spec") = GridSpec{});

    py::enum_<Family>(m, "Family").value("MCS", Family::MCS).value("Do", Family::Do);

    py::class_<SchemeConfig>(m, "SchemeConfig")
        .def(py::init([](int adaptation, Family family, double theta, std::size_t n) {
                 return SchemeConfig{adaptation, family, theta, n};
             }),
             py::arg("adaptation") = 1, py::arg("family") = Family::MCS, py::arg("theta") = 1.0 / 3.0,
             py::arg("n") = 100)
        .def_readwrite("adaptation", &SchemeConfig::adaptation)
        .def_readwrite("family", &SchemeConfig::family)
        .def_readwrite("theta", &SchemeConfig::theta)
        .def_readwrite("n_steps", &SchemeConfig::n_steps);

    py::class_<Experiment>(m, "Experiment")
        .def(py::init([](const CaseConfig& cfg, std::size_t n_ref, std::optional<std::string> cache_dir) {
                 std::optional<std::filesystem::path> dir;
                 if (cache_dir) dir = *cache_dir;
                 return Experiment(cfg, n_ref, dir);
             }),
             py::arg("case"), py::arg("n_ref") = kDefaultReferenceSteps, py::arg("cache_dir") = py::none())
        .def_property_readonly("grid", &Experiment::grid)
        .def("solve", [](const Experiment& e, const SchemeConfig& s) { return e.solve(s).u; },
             py::call_guard<py::gil_scoped_release>())
        .def("temporal_error", &Experiment::temporal_error, py::call_guard<py::gil_scoped_release>())
        .def("price", &price, py::arg("scheme"), py::arg("points"), py::call_guard<py::gil_scoped_release>());

    m.def(
        "jump_spectrum",
        [](const CaseConfig& c) {
            const SpatialGrid g = build_grid(c.params, c.grid);
            return jump_spectrum(g, c.params, c.name).values;
        },
        py::arg("case"));

    auto stab = m.def_submodule("stability", "Stability functions of the scalar test equation");
    py::class_<st::StabilityPoint>(stab, "StabilityPoint")
        .def(py::init([](st::cplx w0, st::cplx z0, st::cplx z1, st::cplx z2) { return st::StabilityPoint{w0, z0, z1, z2}; }),
             py::arg("w0") = 0.0, py::arg("z0") = 0.0, py::arg("z1") = 0.0, py::arg("z2") = 0.0)
        .def_readwrite("w0", &st::StabilityPoint::w0)
        .def_readwrite("z0", &st::StabilityPoint::z0)
        .def_readwrite("z1", &st::StabilityPoint::z1)
        .def_readwrite("z2", &st::StabilityPoint::z2);
    stab.def("eval_R", &st::eval_R, py::arg("point"), py::arg("theta"));
    stab.def("eval_S", &st::eval_S, py::arg("point"), py::arg("theta"));
    stab.def(
        "eval_T",
        [](const st::StabilityPoint& pt, double theta) {
            const auto t = st::eval_T(pt, theta);
            return std::pair{t.t1, t.t0};
        },
        py::arg("point"), py::arg("theta"));
    stab.def("eval_Q", &st::eval_Q, py::arg("z0"), py::arg("z1"), py::arg("z2"), py::arg("theta"));
    stab.def(
        "verify_theorem",
        [](const std::string& id, double theta, std::size_t samples, std::uint64_t seed) {
            const auto rep = st::verify_theorem(st::theorem_from_string(id), theta, samples, seed);
            return py::dict(py::arg("passed") = rep.passed, py::arg("max_observed") = rep.max_observed,
                            py::arg("bound") = rep.bound, py::arg("violations") = rep.violations,
                            py::arg("text") = rep.to_text());
        },
        py::arg("theorem"), py::arg("theta"), py::arg("samples") = 10000, py::arg("seed") = 1);
}
