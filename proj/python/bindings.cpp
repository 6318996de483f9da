// SPDX-License-Identifier: Apache-2.0
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bfdesign/config.hpp"
#include "bfdesign/designs.hpp"
#include "bfdesign/iterative.hpp"
#include "bfdesign/metrics.hpp"
#include "bfdesign/reduced.hpp"
#include "bfdesign/reports.hpp"
#include "bfdesign/response.hpp"

namespace py = pybind11;
using namespace bfd;

PYBIND11_MODULE(_core, m) {
    m.doc() = "broadband filter-and-sum beamformer design";

    py::register_exception<Error>(m, "BfdError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init<std::vector<double>, double, double>(),
             py::arg("positions_m"), py::arg("sample_rate_hz"),
             py::arg("sound_speed_mps"))
        .def_static("uniform", &ArrayGeometry::uniform, py::arg("elements"),
                    py::arg("spacing_m"), py::arg("sample_rate_hz"),
                    py::arg("sound_speed_mps"))
        .def_property_readonly("positions", &ArrayGeometry::positions)
        .def_property_readonly("sample_rate", &ArrayGeometry::sample_rate)
        .def_property_readonly("sound_speed", &ArrayGeometry::sound_speed)
        .def("is_symmetric", &ArrayGeometry::is_symmetric)
        .def("__len__", &ArrayGeometry::num_elements);

    py::class_<FilterBank>(m, "FilterBank")
        .def(py::init<int, int>(), py::arg("channels"), py::arg("taps"))
        .def(py::init<Eigen::MatrixXd>(), py::arg("coeffs"))
        .def_property_readonly(
            "coeffs",
            [](const FilterBank& b) -> Eigen::MatrixXd { return b.coeffs(); })
        .def("flatten", &FilterBank::flatten)
        .def_static("from_flat", &FilterBank::from_flat, py::arg("flat"),
                    py::arg("channels"), py::arg("taps"));

    m.def("steering_vector", &steering_vector, py::arg("geometry"),
          py::arg("taps"), py::arg("omega"), py::arg("theta"));
    m.def("response",
          [](const ArrayGeometry& g, const FilterBank& x, double omega,
             double theta) { return response(g, x, omega, theta); },
          py::arg("geometry"), py::arg("bank"), py::arg("omega"),
          py::arg("theta"));
    m.def("white_noise_gain", &white_noise_gain, py::arg("geometry"),
          py::arg("bank"), py::arg("omega"), py::arg("theta_d"));
    m.def("group_delay", &group_delay, py::arg("geometry"), py::arg("bank"),
          py::arg("omega"), py::arg("theta"));
    m.def("group_delay_gradient", &group_delay_gradient, py::arg("geometry"),
          py::arg("bank"), py::arg("omega"), py::arg("theta"));
    m.def("reduced_steering_symmetric", &reduced_steering_symmetric);
    m.def("reduced_steering_linear_phase", &reduced_steering_linear_phase);

    py::class_<AngleInterval>(m, "AngleInterval")
        .def(py::init<double, double>())
        .def_readwrite("lo", &AngleInterval::lo)
        .def_readwrite("hi", &AngleInterval::hi);

    py::class_<BandSpec>(m, "BandSpec")
        .def(py::init<>())
        .def_readwrite("omega_lo", &BandSpec::omega_lo)
        .def_readwrite("omega_hi", &BandSpec::omega_hi)
        .def_readwrite("passband", &BandSpec::passband)
        .def_readwrite("stopband", &BandSpec::stopband)
        .def_readwrite("theta_d", &BandSpec::theta_d);

    py::enum_<SolveStatus>(m, "SolveStatus")
        .value("optimal", SolveStatus::optimal)
        .value("infeasible", SolveStatus::infeasible)
        .value("max_iterations", SolveStatus::max_iterations)
        .value("numerical_failure", SolveStatus::numerical_failure);

    py::class_<ConvexDesignSpec>(m, "ConvexDesignSpec")
        .def(py::init<ArrayGeometry>(), py::arg("geometry"))
        .def_readwrite("bands", &ConvexDesignSpec::bands)
        .def_readwrite("filter_length", &ConvexDesignSpec::filter_length)
        .def_readwrite("stopband_ceiling", &ConvexDesignSpec::stopband_ceiling)
        .def_readwrite("wng_floor", &ConvexDesignSpec::wng_floor)
        .def_readwrite("tau_d", &ConvexDesignSpec::tau_d)
        .def_readwrite("lambda_", &ConvexDesignSpec::lambda)
        .def_readwrite("symmetry", &ConvexDesignSpec::symmetry)
        .def_readwrite("linear_phase", &ConvexDesignSpec::linear_phase)
        .def_readwrite("grid_freq", &ConvexDesignSpec::grid_freq)
        .def_readwrite("grid_angle", &ConvexDesignSpec::grid_angle);

    py::class_<SolveOutcome>(m, "SolveOutcome")
        .def_readonly("status", &SolveOutcome::status)
        .def_readonly("objective", &SolveOutcome::objective)
        .def_readonly("iterations", &SolveOutcome::iterations)
        .def_readonly("message", &SolveOutcome::message);

    py::class_<DesignResult>(m, "DesignResult")
        .def_readonly("bank", &DesignResult::bank)
        .def_readonly("j_sol", &DesignResult::j_sol)
        .def_readonly("outcome", &DesignResult::outcome)
        .def_readonly("stopband_peak", &DesignResult::stopband_peak)
        .def_readonly("min_constraint_wng", &DesignResult::min_constraint_wng);

    m.def("design_v1",
          [](const ConvexDesignSpec& spec) { return design_v1(spec); },
          py::arg("spec"));
    m.def("design_c",
          [](const ConvexDesignSpec& spec) { return design_c(spec); },
          py::arg("spec"));

    py::class_<TrustSchedule>(m, "TrustSchedule")
        .def(py::init<>())
        .def_readwrite("gamma_start", &TrustSchedule::gamma_start)
        .def_readwrite("gamma_end", &TrustSchedule::gamma_end)
        .def_readwrite("gamma_small", &TrustSchedule::gamma_small)
        .def_readwrite("ramp_length", &TrustSchedule::ramp_length)
        .def("at", &TrustSchedule::at);

    py::class_<GridConfig>(m, "GridConfig")
        .def(py::init<>())
        .def_readwrite("virtual_freq", &GridConfig::virtual_freq)
        .def_readwrite("virtual_angle", &GridConfig::virtual_angle)
        .def_readwrite("actual_freq", &GridConfig::actual_freq)
        .def_readwrite("actual_angle", &GridConfig::actual_angle)
        .def_readwrite("edge_points", &GridConfig::edge_points);

    py::class_<IterativeDesignSpec>(m, "IterativeDesignSpec")
        .def(py::init<ArrayGeometry>(), py::arg("geometry"))
        .def_readwrite("bands", &IterativeDesignSpec::bands)
        .def_readwrite("filter_length", &IterativeDesignSpec::filter_length)
        .def_readwrite("stopband_ceiling",
                       &IterativeDesignSpec::stopband_ceiling)
        .def_readwrite("wng_floor", &IterativeDesignSpec::wng_floor)
        .def_readwrite("tau_d", &IterativeDesignSpec::tau_d)
        .def_readwrite("lambda_", &IterativeDesignSpec::lambda)
        .def_readwrite("slack_weight", &IterativeDesignSpec::slack_weight)
        .def_readwrite("trust", &IterativeDesignSpec::trust)
        .def_readwrite("grid", &IterativeDesignSpec::grid)
        .def_readwrite("step1_grid_freq", &IterativeDesignSpec::step1_grid_freq)
        .def_readwrite("step1_grid_angle",
                       &IterativeDesignSpec::step1_grid_angle)
        .def_readwrite("wng_freq_count", &IterativeDesignSpec::wng_freq_count)
        .def_readwrite("max_iterations", &IterativeDesignSpec::max_iterations)
        .def_readwrite("b_path", &IterativeDesignSpec::b_path);

    py::class_<IterativeResult>(m, "IterativeResult")
        .def_readonly("status", &IterativeResult::status)
        .def_readonly("bank", &IterativeResult::bank)
        .def_readonly("chosen_path", &IterativeResult::chosen_path)
        .def_readonly("j_sol", &IterativeResult::j_sol)
        .def_readonly("gamma_pb", &IterativeResult::gamma_pb)
        .def_readonly("iter_cone_rows", &IterativeResult::iter_cone_rows)
        .def_readonly("full_grid_cone_rows",
                      &IterativeResult::full_grid_cone_rows);

    m.def("run_two_step", &run_two_step, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());

    py::enum_<DesignFamily>(m, "DesignFamily")
        .value("convex", DesignFamily::convex)
        .value("iterative", DesignFamily::iterative);

    py::class_<DesignReport>(m, "DesignReport")
        .def_readonly("passband_ripple_db", &DesignReport::passband_ripple_db)
        .def_readonly("stopband_atten_db", &DesignReport::stopband_atten_db)
        .def_readonly("tau_avg_samples", &DesignReport::tau_avg_samples)
        .def_readonly("sigma_tau_samples", &DesignReport::sigma_tau_samples)
        .def_readonly("j_sol", &DesignReport::j_sol)
        .def_readonly("min_wng_db", &DesignReport::min_wng_db)
        .def_readonly("wng_omegas", &DesignReport::wng_omegas)
        .def_readonly("wng_db", &DesignReport::wng_db)
        .def_readonly("pb_thetas", &DesignReport::pb_thetas)
        .def_readonly("sigma_tau_theta", &DesignReport::sigma_tau_theta);

    m.def("evaluate",
          [](const ArrayGeometry& geom, const FilterBank& bank,
             const BandSpec& bands, double tau_d, DesignFamily family,
             int freq_points, int angle_points) {
              MetricsConfig cfg;
              cfg.freq_points = freq_points;
              cfg.angle_points = angle_points;
              return evaluate(geom, bank, bands, tau_d, family, cfg);
          },
          py::arg("geometry"), py::arg("bank"), py::arg("bands"),
          py::arg("tau_d"), py::arg("family") = DesignFamily::convex,
          py::arg("freq_points") = 200, py::arg("angle_points") = 200);

    m.def("parse_config_text", &parse_run_config_text, py::arg("text"),
          py::arg("origin") = "<string>");
    m.def("parse_config", &parse_run_config, py::arg("path"));
    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("output_dir", &RunConfig::output_dir)
        .def_readwrite("freq_points", &RunConfig::freq_points)
        .def_readwrite("angle_points", &RunConfig::angle_points)
        .def_readwrite("max_iterations", &RunConfig::max_iterations)
        .def("to_geometry", &RunConfig::to_geometry)
        .def("to_bands", &RunConfig::to_bands)
        .def("tau_d", &RunConfig::tau_d)
        .def("to_convex_spec", &RunConfig::to_convex_spec)
        .def("to_iterative_spec", &RunConfig::to_iterative_spec);
    py::class_<RunArtifacts>(m, "RunArtifacts")
        .def_readonly("report", &RunArtifacts::report)
        .def_readonly("bank", &RunArtifacts::bank)
        .def_readonly("exit_code", &RunArtifacts::exit_code);
    m.def("run_design_config", &run_design_config, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
}
