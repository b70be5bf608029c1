#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmeter/bounds.hpp"
#include "qmeter/interferometer.hpp"
#include "qmeter/oracle.hpp"
#include "qmeter/sweep.hpp"
#include "qmeter/verify.hpp"

namespace py = pybind11;
using namespace qmeter;

namespace {

ShapeFamily family_from_name(const std::string& name) {
    const auto f = parse_family(name);
    if (!f) throw py::value_error("unknown shape '" + name + "'");
    return *f;
}

py::dict point_to_dict(const SweepPoint& p) {
    py::dict d;
    d["shape"] = p.shape;
    d["wq_dt"] = p.wq_dt;
    d["epsilon"] = p.epsilon;
    d["epsilon_b"] = p.epsilon_b;
    d["ratio"] = p.ratio;
    d["dw_dt_product"] = p.dw_dt_product;
    d["p_overlap"] = p.p_overlap;
    d["tau_star"] = p.tau_star;
    return d;
}

} // namespace

PYBIND11_MODULE(qmeter, m) {
    m.doc() = "Qubit readout by a flying-particle meter in a Mach-Zehnder "
              "interferometer: error, conservation-law bound, grid oracle";

    py::register_exception<NumericError>(m, "NumericError");

    py::class_<WavepacketSpec>(m, "WavepacketSpec")
        .def_property(
            "tau", [](const WavepacketSpec& s) { return s.tau; },
            [](WavepacketSpec& s, double tau) { s.tau = tau; })
        .def("__repr__", [](const WavepacketSpec& s) {
            return "<WavepacketSpec tau=" + format_double(s.tau) + ">";
        });

    m.def("gaussian", &gaussian, py::arg("sigma_t"), py::arg("tau") = 0.0);
    m.def("smoothed_square", &smoothed_square, py::arg("s"), py::arg("eta"),
          py::arg("tau") = 0.0);
    m.def("smoothed_exponential", &smoothed_exponential, py::arg("gamma"), py::arg("eta"),
          py::arg("tau") = 0.0);
    m.def("sampled", &sampled, py::arg("times"), py::arg("amplitudes"), py::arg("tau") = 0.0);
    m.def(
        "spec_for_dt",
        [](const std::string& shape, double eta, double dt) {
            return spec_for_dt(family_from_name(shape), eta, dt);
        },
        py::arg("shape"), py::arg("eta"), py::arg("target_dt"));
    m.def(
        "solve_param_for_dt",
        [](const std::string& shape, double eta, double dt) {
            return solve_param_for_dt(family_from_name(shape), eta, dt);
        },
        py::arg("shape"), py::arg("eta"), py::arg("target_dt"));

    m.def("amplitude", &amplitude, py::arg("spec"), py::arg("t"));
    m.def("time_dispersion", &time_dispersion, py::arg("spec"));
    m.def("frequency_dispersion", &frequency_dispersion, py::arg("spec"));
    m.def("overlap_p", &overlap_p, py::arg("spec"), py::arg("omega_q"));
    m.def("optimal_tau", &optimal_tau, py::arg("spec"), py::arg("omega_q"));

    py::class_<MeasurementConfig>(m, "MeasurementConfig")
        .def(py::init<double, double, double>(), py::arg("theta"), py::arg("phi"),
             py::arg("omega_q"))
        .def_readonly("theta", &MeasurementConfig::theta)
        .def_readonly("phi", &MeasurementConfig::phi)
        .def_readonly("omega_q", &MeasurementConfig::omega_q);

    py::class_<QubitState>(m, "QubitState")
        .def(py::init<cplx, cplx>(), py::arg("b_g"), py::arg("b_e"))
        .def_static("from_z_basis", &QubitState::from_z_basis, py::arg("c_g"), py::arg("c_e"),
                    py::arg("theta"))
        .def_readonly("b_g", &QubitState::b_g)
        .def_readonly("b_e", &QubitState::b_e);

    m.def(
        "scattering_amplitudes",
        [](const MeasurementConfig& c) {
            const auto a = amplitudes(c);
            py::dict d;
            d["i_gg"] = a.i_gg;
            d["i_ee"] = a.i_ee;
            d["i_ge"] = a.i_ge;
            d["i_eg"] = a.i_eg;
            return d;
        },
        py::arg("config"));
    m.def(
        "scatter",
        [](const QubitState& s, const MeasurementConfig& c) {
            py::list out;
            for (const auto& b : scatter(s, c)) {
                py::dict d;
                d["level"] = b.qubit_level == QubitLevel::gTheta ? "g" : "e";
                d["shift"] = b.frequency_shift;
                d["amplitude"] = b.amplitude;
                out.append(d);
            }
            return out;
        },
        py::arg("state"), py::arg("config"));

    m.def("readout_error",
          py::overload_cast<const MeasurementConfig&, double>(&readout_error),
          py::arg("config"), py::arg("p_overlap"));
    m.def("optimal_error", &optimal_error, py::arg("theta"), py::arg("p_overlap"));
    m.def(
        "pointer_expectations",
        [](const MeasurementConfig& c, double p) {
            const auto [a, b] = pointer_expectations(c, p);
            return py::make_tuple(a, b);
        },
        py::arg("config"), py::arg("p_overlap"));

    m.def(
        "ozawa_bound_state",
        [](const QubitState& s, double theta, double domega_over_wq) {
            return ozawa_bound_state(s, BoundInput(theta, domega_over_wq));
        },
        py::arg("state"), py::arg("theta"), py::arg("domega_over_wq"));
    m.def(
        "ozawa_bound_max",
        [](double theta, double domega_over_wq) {
            return ozawa_bound_max(BoundInput(theta, domega_over_wq));
        },
        py::arg("theta"), py::arg("domega_over_wq"));
    m.def(
        "error_bound_ratio",
        [](double theta, double delta_t, double delta_omega, double p, double omega_q) {
            return error_bound_ratio(theta, {delta_t, delta_omega}, p, omega_q);
        },
        py::arg("theta"), py::arg("delta_t"), py::arg("delta_omega"), py::arg("p_overlap"),
        py::arg("omega_q"));

    m.def(
        "evaluate_point",
        [](const std::string& shape, double wq_dt, double eta, double theta) {
            return point_to_dict(evaluate_point(family_from_name(shape), wq_dt, eta, theta));
        },
        py::arg("shape"), py::arg("wq_dt"), py::arg("eta") = 1.0 / pi,
        py::arg("theta") = pi / 2.0);

    m.def(
        "oracle_error",
        [](const MeasurementConfig& config, const WavepacketSpec& spec, int grid_points) {
            const auto grid = oracle::make_grid(spec, grid_points);
            return std::sqrt(oracle::measure_error_squared(config, spec, grid));
        },
        py::arg("config"), py::arg("spec"), py::arg("grid_points") = 1 << 14,
        "Readout error recomputed by the grid-evolution oracle");

    m.def(
        "run_acceptance",
        [](int grid_points, std::uint64_t seed, int jobs) {
            py::list out;
            verify::VerifyOptions opt;
            opt.grid_points = grid_points;
            opt.seed = seed;
            opt.jobs = jobs;
            for (const auto& r : verify::run_acceptance(opt)) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["measured"] = r.measured;
                d["limit"] = r.limit;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("grid_points") = 1 << 14, py::arg("seed") = 0, py::arg("jobs") = 0);
}
