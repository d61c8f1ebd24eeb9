// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nfchan/channel_model.hpp"
#include "nfchan/channel_types.hpp"
#include "nfchan/geometry.hpp"
#include "nfchan/multiuser.hpp"
#include "nfchan/surface.hpp"

namespace nfchan {

struct UserSpec {
    Point3 position{0, 0, 0};
    int n_r = 1;
};

struct ScattererSpec {
    Point3 position{0, 0, 0};
    double loss = 1.0;
};

struct ReflectorSpec {
    RoughSurface surface;
    // When set, the wall loss is solved so user 0's specular Rician factor
    // k_bar equals this target.
    std::optional<double> k_bar_target;
};

struct PathLossSpec {
    double beta_db = -68.0;
    double d0_m = 1.0;
    double exponent = 2.0;

    // Free-space-style amplitude |c| = sqrt(beta) (d/d0)^(-eta/2).
    double amplitude(double distance_m) const;
};

struct OracleSettings {
    double grid_step_wavelengths = 0.125;
    std::size_t realizations = 100;
};

struct ScenarioConfig {
    double frequency_hz = 0.0;
    std::uint64_t seed = 1;

    Point3 bs_center{0, 0, 0};
    int bs_n_u = 1, bs_n_v = 1;
    double bs_spacing_m = 0.0;  // 0 means lambda/2
    Point3 bs_axis_u{0, 1, 0}, bs_axis_v{0, 0, 1};

    std::vector<UserSpec> users;
    std::vector<ScattererSpec> scatterers;
    std::vector<ReflectorSpec> reflectors;

    PathLossSpec pathloss;
    NoiseModel noise;
    std::vector<double> powers_dbm;
    OracleSettings oracle;

    // Raw per-experiment parameter blocks, validated by each experiment.
    std::string experiments_json = "{}";

    double wavelength() const { return wavelength_from_frequency(frequency_hz); }
    double wavenumber() const { return wavenumber_from_frequency(frequency_hz); }
    ArrayGeometry bs_array() const;
    double bs_spacing_effective() const { return bs_spacing_m > 0.0 ? bs_spacing_m : 0.5 * wavelength(); }

    // Resolved configuration with defaults filled in.
    std::string to_json() const;
};

// Strict loader: unknown fields and missing required fields are errors naming
// the offending field.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const nlohmann::json& j);

// --- Assembled channel --------------------------------------------------------

struct PathGains {
    std::complex<double> c0{0.0, 0.0};
    std::vector<std::complex<double>> c_hat;   // per scatterer
    std::vector<std::complex<double>> c_bar;   // per reflector
    std::vector<double> c_tilde_var;           // per reflector, E{|c_tilde|^2}
    std::vector<double> k_hat;
    std::vector<double> k_bar;
    std::vector<double> k_tilde;
};

struct AssembledChannel {
    ChannelMatrix matrix;
    PathGains gains;
    std::vector<std::string> warnings;
};

struct AssemblyOptions {
    // By default the stochastic reflector term is dropped (k_tilde ~ 0);
    // enabling it draws i.i.d. CN(0,1) entries.
    bool include_stochastic = false;
};

AssembledChannel assemble_channel(const ScenarioConfig& scenario, std::size_t user_index, std::uint64_t seed,
                                  const AssemblyOptions& opts = {});
std::vector<AssembledChannel> assemble_channels(const ScenarioConfig& scenario, std::uint64_t seed,
                                                const AssemblyOptions& opts = {});

// --- Two-user serving strategies -----------------------------------------------

enum class ServingStrategy { los_only, nlos_only };

struct SumRateOptions {
    AssemblyOptions assembly;
    // Two-array serving: each half of the aperture carries one user's stream.
    bool partitioned_array = false;
};

// Sum of log2(1 + SINR_k) with equal power split and per-user focus
// beamformers (LOS positions or virtual NLOS positions of reflector 0).
double sum_rate(const ScenarioConfig& scenario, ServingStrategy strategy, double total_power_w, std::uint64_t seed,
                const SumRateOptions& opts = {});

}  // namespace nfchan
