// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nfchan/acceptance.hpp"
#include "nfchan/channel_model.hpp"
#include "nfchan/experiments.hpp"
#include "nfchan/hf_oracle.hpp"
#include "nfchan/multiuser.hpp"
#include "nfchan/scenario.hpp"
#include "nfchan/special_functions.hpp"
#include "nfchan/statistics.hpp"
#include "nfchan/surface.hpp"

namespace py = pybind11;
using namespace nfchan;

PYBIND11_MODULE(nfchan, m) {
    m.doc() = "Near-field MIMO channels with non-ideal surface reflections";

    m.attr("SPEED_OF_LIGHT") = kSpeedOfLight;
    m.def("wavelength_from_frequency", &wavelength_from_frequency, py::arg("frequency_hz"));
    m.def("wavenumber_from_frequency", &wavenumber_from_frequency, py::arg("frequency_hz"));

    // --- geometry ---
    py::class_<PlaneSpec>(m, "PlaneSpec")
        .def(py::init<const Point3&, const Point3&, const Point3&, const Point3&, double, double>(),
             py::arg("origin"), py::arg("normal"), py::arg("axis_u"), py::arg("axis_v"), py::arg("extent_u"),
             py::arg("extent_v"))
        .def_property_readonly("origin", &PlaneSpec::origin)
        .def_property_readonly("normal", &PlaneSpec::normal)
        .def_property_readonly("extent_u", &PlaneSpec::extent_u)
        .def_property_readonly("extent_v", &PlaneSpec::extent_v)
        .def("signed_distance", &PlaneSpec::signed_distance)
        .def("area", &PlaneSpec::area);

    py::class_<ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init<std::vector<Point3>>(), py::arg("elements"))
        .def_property_readonly("center", &ArrayGeometry::center)
        .def("__len__", &ArrayGeometry::size)
        .def("element", &ArrayGeometry::element)
        .def_property_readonly("elements", &ArrayGeometry::elements);

    m.def("make_upa", &make_upa, py::arg("center"), py::arg("n_u"), py::arg("n_v"), py::arg("spacing"),
          py::arg("axis_u"), py::arg("axis_v"));
    m.def("make_ula", &make_ula, py::arg("center"), py::arg("n"), py::arg("spacing"), py::arg("axis"));
    m.def("mirror_point", &mirror_point, py::arg("point"), py::arg("plane"));
    m.def("mirror_array", &mirror_array, py::arg("array"), py::arg("plane"));
    m.def("nf_array_response", &nf_array_response, py::arg("array"), py::arg("focus"), py::arg("wavenumber"));

    // --- surface ---
    py::class_<RoughSurface>(m, "RoughSurface")
        .def(py::init<const PlaneSpec&, double, double, double, double>(), py::arg("plane"), py::arg("sigma_z"),
             py::arg("corr_len"), py::arg("passivity") = 1.0, py::arg("loss_factor") = 1.0)
        .def_readonly("sigma_z", &RoughSurface::sigma_z)
        .def_readonly("corr_len", &RoughSurface::corr_len)
        .def_readonly("passivity", &RoughSurface::passivity)
        .def_property_readonly("plane", [](const RoughSurface& s) { return s.plane; });

    py::class_<SurfaceRealization>(m, "SurfaceRealization")
        .def_property_readonly("n_u", &SurfaceRealization::n_u)
        .def_property_readonly("n_v", &SurfaceRealization::n_v)
        .def_property_readonly("step_u", &SurfaceRealization::step_u)
        .def_property_readonly("step_v", &SurfaceRealization::step_v)
        .def_property_readonly("seed", &SurfaceRealization::seed)
        .def_property_readonly("heights", [](const SurfaceRealization& r) { return r.heights(); })
        .def_property_readonly("warnings", &SurfaceRealization::warnings)
        .def("height", &SurfaceRealization::height);

    m.def("sample_surface", &sample_surface, py::arg("surface"), py::arg("grid_step"), py::arg("seed"));
    m.def("empirical_autocorr", &empirical_autocorr, py::arg("realization"), py::arg("lag"));
    m.def("save_realization", &save_realization, py::arg("realization"), py::arg("path"));

    // --- special functions ---
    m.def("sinc", &sinc, py::arg("x"));
    m.def("bessel_j0", &bessel_j0, py::arg("x"));
    m.def("erfi", &erfi, py::arg("z"));
    m.def("faddeeva_w", &faddeeva_w, py::arg("z"));
    m.def("quad_phase_integral", &quad_phase_integral, py::arg("a"), py::arg("b"), py::arg("L"));
    m.def("quad_phase_integral_quadrature", &quad_phase_integral_quadrature, py::arg("a"), py::arg("b"),
          py::arg("L"), py::arg("tol") = 1e-10);

    // --- oracle ---
    py::class_<HFConfig>(m, "HFConfig")
        .def(py::init<>())
        .def_readwrite("exact_amplitude", &HFConfig::exact_amplitude)
        .def_readwrite("exact_area_element", &HFConfig::exact_area_element)
        .def_readwrite("block_rows", &HFConfig::block_rows);

    py::enum_<Provenance>(m, "Provenance")
        .value("oracle", Provenance::oracle)
        .value("analytic_deterministic", Provenance::analytic_deterministic)
        .value("analytic_sampled", Provenance::analytic_sampled);

    py::class_<ChannelMatrix>(m, "ChannelMatrix")
        .def_readonly("entries", &ChannelMatrix::entries)
        .def_readonly("provenance", &ChannelMatrix::provenance);

    m.def("hf_coefficient", &hf_coefficient, py::arg("tx"), py::arg("rx"), py::arg("realization"),
          py::arg("wavenumber"), py::arg("config") = HFConfig{});
    m.def("hf_coefficients", &hf_coefficients, py::arg("tx"), py::arg("rx_list"), py::arg("realization"),
          py::arg("wavenumber"), py::arg("config") = HFConfig{});
    m.def("hf_channel_matrix", &hf_channel_matrix, py::arg("tx_array"), py::arg("rx_array"), py::arg("realization"),
          py::arg("wavenumber"), py::arg("config") = HFConfig{});

    // --- analytic model ---
    m.def("los_matrix", &los_matrix, py::arg("tx_array"), py::arg("rx_array"), py::arg("wavenumber"));
    m.def("scatterer_matrix", &scatterer_matrix, py::arg("tx_array"), py::arg("rx_array"), py::arg("scatterer"),
          py::arg("wavenumber"));
    m.def("roughness_attenuation", &roughness_attenuation, py::arg("g"));
    m.def("kappa_z", &kappa_z, py::arg("tx"), py::arg("rx"), py::arg("plane"), py::arg("wavenumber"));

    py::enum_<KappaRhoForm>(m, "KappaRhoForm")
        .value("printed", KappaRhoForm::printed)
        .value("harmonic_fit", KappaRhoForm::harmonic_fit);

    m.def("kappa_rho", &kappa_rho, py::arg("tx"), py::arg("rx"), py::arg("plane"), py::arg("wavenumber"),
          py::arg("form") = KappaRhoForm::harmonic_fit);

    py::enum_<MirrorSide>(m, "MirrorSide").value("rx", MirrorSide::rx).value("tx", MirrorSide::tx);

    py::class_<SpecularComponent>(m, "SpecularComponent")
        .def_readonly("gain", &SpecularComponent::gain)
        .def_readonly("field_magnitude", &SpecularComponent::field_magnitude)
        .def_readonly("g", &SpecularComponent::g)
        .def_readonly("mirror_distance", &SpecularComponent::mirror_distance)
        .def_readonly("matrix", &SpecularComponent::matrix);

    m.def("deterministic_reflector", &deterministic_reflector, py::arg("tx_array"), py::arg("rx_array"),
          py::arg("surface"), py::arg("wavenumber"), py::arg("side") = MirrorSide::rx);

    m.def(
        "spatial_correlation_integral",
        [](const Point3& tx_a, const Point3& tx_b, const Point3& rx_a, const Point3& rx_b, const PlaneSpec& plane,
           double k) { return spatial_correlation_integral(tx_a, tx_b, rx_a, rx_b, plane, k); },
        py::arg("tx_a"), py::arg("tx_b"), py::arg("rx_a"), py::arg("rx_b"), py::arg("plane"), py::arg("wavenumber"));
    m.def("spatial_correlation_sinc", &spatial_correlation_sinc, py::arg("d"), py::arg("theta1"), py::arg("theta2"),
          py::arg("wavelength"));
    m.def("correlation_aligned", &correlation_aligned, py::arg("d"), py::arg("theta_c"), py::arg("wavelength"));
    m.def("correlation_perpendicular", &correlation_perpendicular, py::arg("d"), py::arg("theta_c"),
          py::arg("wavelength"));

    py::class_<ReflectorPowerParams>(m, "ReflectorPowerParams")
        .def(py::init<>())
        .def_readwrite("zeta", &ReflectorPowerParams::zeta)
        .def_readwrite("wavelength", &ReflectorPowerParams::wavelength)
        .def_readwrite("u_tx", &ReflectorPowerParams::u_tx)
        .def_readwrite("u_rx", &ReflectorPowerParams::u_rx)
        .def_readwrite("mirror_distance", &ReflectorPowerParams::mirror_distance)
        .def_readwrite("area_rx", &ReflectorPowerParams::area_rx)
        .def_readwrite("area_reflector", &ReflectorPowerParams::area_reflector)
        .def_readwrite("directivity_tx", &ReflectorPowerParams::directivity_tx)
        .def_readwrite("directivity_reflector", &ReflectorPowerParams::directivity_reflector);

    py::class_<UncorrelatedPowerGains>(m, "UncorrelatedPowerGains")
        .def_readonly("c_tilde_inf_sq", &UncorrelatedPowerGains::c_tilde_inf_sq)
        .def_readonly("stochastic_power", &UncorrelatedPowerGains::stochastic_power)
        .def_readonly("total_power", &UncorrelatedPowerGains::total_power);

    m.def("power_gain_uncorrelated", &power_gain_uncorrelated, py::arg("params"), py::arg("g"));

    py::class_<CorrelatedPowerLaw>(m, "CorrelatedPowerLaw")
        .def_readonly("c_bar0_sq", &CorrelatedPowerLaw::c_bar0_sq)
        .def_readonly("c_tilde_inf_sq", &CorrelatedPowerLaw::c_tilde_inf_sq)
        .def_readonly("s_min", &CorrelatedPowerLaw::s_min)
        .def("evaluate_s", &CorrelatedPowerLaw::evaluate_s)
        .def("s_value", &CorrelatedPowerLaw::s_value);

    m.def("make_correlated_power_law", &make_correlated_power_law, py::arg("c_bar0_sq"), py::arg("c_tilde_inf_sq"));
    m.def("power_gain_correlated", &power_gain_correlated, py::arg("params"), py::arg("kappa_rho"),
          py::arg("kappa_z"), py::arg("sigma_z"), py::arg("corr_len"));

    py::class_<ReflectorModel>(m, "ReflectorModel")
        .def_readonly("g", &ReflectorModel::g)
        .def_readonly("kappa_z", &ReflectorModel::kappa_z)
        .def_readonly("kappa_rho", &ReflectorModel::kappa_rho)
        .def_readonly("s_param", &ReflectorModel::s_param)
        .def_readonly("c_bar_flat", &ReflectorModel::c_bar_flat)
        .def_readonly("c_tilde_inf_sq", &ReflectorModel::c_tilde_inf_sq);

    m.def("make_reflector_model", &make_reflector_model, py::arg("tx_array"), py::arg("rx_array"),
          py::arg("surface"), py::arg("wavenumber"), py::arg("area_rx_override") = 0.0);
    m.def("sample_reflector_channel", &sample_reflector_channel, py::arg("model"), py::arg("tx_array"),
          py::arg("rx_array"), py::arg("wavenumber"), py::arg("seed"), py::arg("correlated_entries") = false);

    // --- statistics ---
    py::class_<EnsembleSummary>(m, "EnsembleSummary")
        .def_readonly("n_samples", &EnsembleSummary::n_samples)
        .def_readonly("mean", &EnsembleSummary::mean)
        .def_readonly("variance", &EnsembleSummary::variance)
        .def_readonly("mean_abs", &EnsembleSummary::mean_abs)
        .def_readonly("skew_re", &EnsembleSummary::skew_re)
        .def_readonly("skew_im", &EnsembleSummary::skew_im)
        .def_readonly("kurt_re", &EnsembleSummary::kurt_re)
        .def_readonly("kurt_im", &EnsembleSummary::kurt_im)
        .def("to_json", &EnsembleSummary::to_json);

    py::class_<NormalityReport>(m, "NormalityReport")
        .def_readonly("passed", &NormalityReport::pass)
        .def_readonly("degenerate", &NormalityReport::degenerate)
        .def_readonly("skew_re", &NormalityReport::skew_re)
        .def_readonly("skew_im", &NormalityReport::skew_im)
        .def_readonly("kurt_re", &NormalityReport::kurt_re)
        .def_readonly("kurt_im", &NormalityReport::kurt_im);

    m.def("summarize", &summarize, py::arg("samples"), py::arg("hist_bins") = 32);
    m.def("run_ensemble", &run_ensemble, py::arg("evaluator"), py::arg("surface"), py::arg("grid_step"),
          py::arg("n"), py::arg("base_seed"));
    m.def("normality_check", &normality_check, py::arg("summary"));
    m.def("normalized_correlation", &normalized_correlation, py::arg("a"), py::arg("b"));

    // --- multiuser ---
    py::enum_<BeamKind>(m, "BeamKind")
        .value("los_focus", BeamKind::los_focus)
        .value("nlos_focus", BeamKind::nlos_focus);

    py::class_<Beamformer>(m, "Beamformer")
        .def_readonly("weights", &Beamformer::weights)
        .def_readonly("focus", &Beamformer::focus)
        .def_readonly("kind", &Beamformer::kind);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init<>())
        .def_readwrite("bandwidth_hz", &NoiseModel::bandwidth_hz)
        .def_readwrite("n0_dbm_hz", &NoiseModel::n0_dbm_hz)
        .def_readwrite("noise_figure_db", &NoiseModel::noise_figure_db)
        .def("noise_power_w", &NoiseModel::noise_power_w);

    m.def("nf_focus_beamformer", &nf_focus_beamformer, py::arg("array"), py::arg("focus"), py::arg("wavenumber"),
          py::arg("kind") = BeamKind::los_focus);
    m.def("project", &project, py::arg("h_row"), py::arg("beamformer"));
    m.def("sinr", &sinr, py::arg("h_row"), py::arg("q_own"), py::arg("q_other"), py::arg("power_w"),
          py::arg("noise_w"));
    m.def("sinr_los_closed_form", &sinr_los_closed_form, py::arg("a1"), py::arg("ly"), py::arg("noise_ratio"));
    m.def("sinr_nlos_closed_form", &sinr_nlos_closed_form, py::arg("a2"), py::arg("b"), py::arg("ly"),
          py::arg("k_bar"), py::arg("noise_ratio"));
    m.def("smr", &smr, py::arg("h_main_row"), py::arg("h_side_row"), py::arg("beamformer"));
    m.def("discrete_two_user_sinr", &discrete_two_user_sinr, py::arg("array"), py::arg("target"),
          py::arg("focus_other"), py::arg("wavenumber"), py::arg("noise_ratio"));

    // --- scenario / experiments ---
    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readonly("frequency_hz", &ScenarioConfig::frequency_hz)
        .def_readonly("seed", &ScenarioConfig::seed)
        .def("wavelength", &ScenarioConfig::wavelength)
        .def("wavenumber", &ScenarioConfig::wavenumber)
        .def("bs_array", &ScenarioConfig::bs_array)
        .def("to_json", &ScenarioConfig::to_json);

    m.def("load_scenario", &load_scenario, py::arg("path"));

    py::enum_<ServingStrategy>(m, "ServingStrategy")
        .value("los_only", ServingStrategy::los_only)
        .value("nlos_only", ServingStrategy::nlos_only);

    py::class_<PathGains>(m, "PathGains")
        .def_readonly("c0", &PathGains::c0)
        .def_readonly("c_hat", &PathGains::c_hat)
        .def_readonly("c_bar", &PathGains::c_bar)
        .def_readonly("c_tilde_var", &PathGains::c_tilde_var)
        .def_readonly("k_hat", &PathGains::k_hat)
        .def_readonly("k_bar", &PathGains::k_bar)
        .def_readonly("k_tilde", &PathGains::k_tilde);

    py::class_<AssembledChannel>(m, "AssembledChannel")
        .def_readonly("matrix", &AssembledChannel::matrix)
        .def_readonly("gains", &AssembledChannel::gains)
        .def_readonly("warnings", &AssembledChannel::warnings);

    m.def(
        "assemble_channel",
        [](const ScenarioConfig& s, std::size_t user, std::uint64_t seed, bool stochastic) {
            AssemblyOptions o;
            o.include_stochastic = stochastic;
            return assemble_channel(s, user, seed, o);
        },
        py::arg("scenario"), py::arg("user_index"), py::arg("seed"), py::arg("include_stochastic") = false);
    m.def(
        "sum_rate",
        [](const ScenarioConfig& s, ServingStrategy strategy, double power_w, std::uint64_t seed) {
            return sum_rate(s, strategy, power_w, seed);
        },
        py::arg("scenario"), py::arg("strategy"), py::arg("total_power_w"), py::arg("seed"));

    m.def(
        "run_experiment",
        [](const std::string& name, const ScenarioConfig& scenario, const std::string& out_dir, bool fast) {
            RunOptions opts;
            opts.fast = fast;
            return run_experiment(name, scenario, out_dir, opts);
        },
        py::arg("name"), py::arg("scenario"), py::arg("out_dir"), py::arg("fast") = false);
}
