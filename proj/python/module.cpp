#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopw/errors.hpp"
#include "hopw/observables.hpp"
#include "hopw/specfun.hpp"

namespace py = pybind11;
using namespace hopw;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Time-dependent partial waves of the 3D oscillator and spin-orbit packet dynamics";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<IndexError>(m, "IndexError", PyExc_IndexError);
    py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<PacketSpec>(m, "PacketSpec")
        .def(py::init<>())
        .def(py::init<const Vec3&, const Vec3&>(), py::arg("r0"), py::arg("p0"))
        .def_static("axial", &PacketSpec::axial, py::arg("energy"), py::arg("sign") = -1.0)
        .def_property_readonly("position", &PacketSpec::position)
        .def_property_readonly("momentum", &PacketSpec::momentum)
        .def_property_readonly("energy", &PacketSpec::energy)
        .def_property_readonly("root", &PacketSpec::root)
        .def("__repr__", [](const PacketSpec& s) {
            return "PacketSpec(energy=" + std::to_string(s.energy()) + ")";
        });

    m.def("mod_sph_bessel_first", &specfun::mod_sph_bessel_first, py::arg("l"), py::arg("z"));
    m.def("sph_harm", &specfun::sph_harm, py::arg("l"), py::arg("m"), py::arg("theta"), py::arg("phi"));
    m.def("gaussian_packet", &gaussian_packet, py::arg("spec"), py::arg("r"), py::arg("t"));
    m.def(
        "partial_wave",
        [](int l, int mm, const PacketSpec& spec, const Vec3& r, double t) {
            return partial_wave(WaveIndex{l, mm}, spec, r, t);
        },
        py::arg("l"), py::arg("m"), py::arg("spec"), py::arg("r"), py::arg("t"));

    py::class_<CoefficientTable>(m, "CoefficientTable")
        .def_property_readonly("lmax", &CoefficientTable::lmax)
        .def("__call__", &CoefficientTable::operator(), py::arg("l"), py::arg("m"));
    m.def("coefficients", &coefficients, py::arg("spec"), py::arg("lmax"));
    m.def("reconstruct", &reconstruct, py::arg("table"), py::arg("r"), py::arg("t"));
    m.def("captured_norm", &captured_norm, py::arg("table"));
    m.def("truncation_lmax", &truncation_lmax, py::arg("spec"), py::arg("epsilon"));

    m.def(
        "fg_coefficients",
        [](int l, double t, double kappa) {
            const FG fg = fg_coefficients(l, t, kappa);
            return py::make_tuple(fg.f, fg.g);
        },
        py::arg("l"), py::arg("t"), py::arg("kappa") = 1.0);

    py::class_<SpinOrbitParams>(m, "SpinOrbitParams")
        .def(py::init([](double kappa, bool frozen) { return SpinOrbitParams{kappa, frozen}; }),
             py::arg("kappa") = 1.0, py::arg("frozen") = false)
        .def_readwrite("kappa", &SpinOrbitParams::kappa)
        .def_readwrite("frozen", &SpinOrbitParams::frozen)
        .def_property_readonly("spin_orbit_period", &SpinOrbitParams::spin_orbit_period);

    py::class_<SpinorSystem>(m, "SpinorSystem")
        .def_static("prepare", &SpinorSystem::prepare, py::arg("spec"), py::arg("spin_axis"), py::arg("lmax"),
                    py::arg("params"))
        .def("amplitude", [](const SpinorSystem& s, const Vec3& r, double t) {
            const SpinorAmplitude a = s.amplitude(r, t);
            return py::make_tuple(a.up, a.down);
        });

    m.def(
        "norm_and_spin",
        [](const SpinorSystem& s, double t) {
            const NormSpin ns = norm_and_spin(s, QuadratureSpec::for_packet(s.table().spec()), t);
            return py::make_tuple(ns.norm, ns.sigma);
        },
        py::arg("system"), py::arg("t"));

    m.def(
        "density_plane",
        [](const SpinorSystem& s, int normal_axis, double offset, double half_extent, int count, double t) {
            const DensityField f = density_grid(s, GridSpec::plane(normal_axis, offset, half_extent, count), t);
            return f.values;
        },
        py::arg("system"), py::arg("normal_axis"), py::arg("offset"), py::arg("half_extent"), py::arg("count"),
        py::arg("t"));
}
