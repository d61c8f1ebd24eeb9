// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "nfchan/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nfchan/rng.hpp"

namespace nfchan {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw std::runtime_error("scenario: " + context + ": " + message);
}

void check_keys(const json& j, const std::string& context, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(context, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(context, "unknown field '" + it.key() + "'");
}

const json& require(const json& j, const std::string& context, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) fail(context, "missing required field '" + key + "'");
    return *it;
}

double require_number(const json& j, const std::string& context, const std::string& key) {
    const json& v = require(j, context, key);
    if (!v.is_number()) fail(context, "field '" + key + "' must be a number");
    return v.get<double>();
}

double optional_number(const json& j, const std::string& context, const std::string& key, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) fail(context, "field '" + key + "' must be a number");
    return it->get<double>();
}

Point3 require_vec3(const json& j, const std::string& context, const std::string& key) {
    const json& v = require(j, context, key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        fail(context, "field '" + key + "' must be an array of 3 numbers");
    return Point3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

Point3 optional_vec3(const json& j, const std::string& context, const std::string& key, const Point3& fallback) {
    if (j.find(key) == j.end()) return fallback;
    return require_vec3(j, context, key);
}

PlaneSpec parse_plane(const json& j, const std::string& context) {
    check_keys(j, context, {"origin_m", "normal", "axis_u", "axis_v", "extent_u_m", "extent_v_m"});
    return PlaneSpec(require_vec3(j, context, "origin_m"), require_vec3(j, context, "normal").normalized(),
                     require_vec3(j, context, "axis_u").normalized(),
                     require_vec3(j, context, "axis_v").normalized(), require_number(j, context, "extent_u_m"),
                     require_number(j, context, "extent_v_m"));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json vec3_json(const Point3& p) { return json::array({p.x(), p.y(), p.z()}); }

}  // namespace

double PathLossSpec::amplitude(double distance_m) const {
    if (!(distance_m > 0.0)) throw std::invalid_argument("pathloss: distance must be positive");
    const double beta = std::pow(10.0, beta_db / 10.0);
    return std::sqrt(beta) * std::pow(distance_m / d0_m, -0.5 * exponent);
}

ArrayGeometry ScenarioConfig::bs_array() const {
    return make_upa(bs_center, bs_n_u, bs_n_v, bs_spacing_effective(), bs_axis_u, bs_axis_v);
}

ScenarioConfig parse_scenario(const json& j) {
    const std::string top = "top level";
    check_keys(j, top,
               {"frequency_hz", "seed", "bs_array", "users", "scatterers", "reflectors", "pathloss", "noise",
                "powers_dbm", "oracle", "experiments"});

    ScenarioConfig cfg;
    cfg.frequency_hz = require_number(j, top, "frequency_hz");
    if (!(cfg.frequency_hz > 0.0)) fail(top, "frequency_hz must be positive");
    if (auto it = j.find("seed"); it != j.end()) cfg.seed = it->get<std::uint64_t>();

    {
        const json& a = require(j, top, "bs_array");
        const std::string ctx = "bs_array";
        check_keys(a, ctx, {"center_m", "n_u", "n_v", "spacing_m", "axis_u", "axis_v"});
        cfg.bs_center = optional_vec3(a, ctx, "center_m", Point3(0, 0, 0));
        cfg.bs_n_u = static_cast<int>(optional_number(a, ctx, "n_u", 1));
        cfg.bs_n_v = static_cast<int>(optional_number(a, ctx, "n_v", 1));
        cfg.bs_spacing_m = optional_number(a, ctx, "spacing_m", 0.0);
        cfg.bs_axis_u = optional_vec3(a, ctx, "axis_u", Point3(0, 1, 0)).normalized();
        cfg.bs_axis_v = optional_vec3(a, ctx, "axis_v", Point3(0, 0, 1)).normalized();
    }

    if (auto it = j.find("users"); it != j.end()) {
        if (!it->is_array()) fail(top, "users must be an array");
        for (const auto& u : *it) {
            const std::string ctx = "users[]";
            check_keys(u, ctx, {"position_m", "n_r"});
            UserSpec spec;
            spec.position = require_vec3(u, ctx, "position_m");
            spec.n_r = static_cast<int>(optional_number(u, ctx, "n_r", 1));
            if (spec.n_r < 1) fail(ctx, "n_r must be >= 1");
            cfg.users.push_back(spec);
        }
    }

    if (auto it = j.find("scatterers"); it != j.end()) {
        if (!it->is_array()) fail(top, "scatterers must be an array");
        for (const auto& s : *it) {
            const std::string ctx = "scatterers[]";
            check_keys(s, ctx, {"position_m", "loss"});
            ScattererSpec spec;
            spec.position = require_vec3(s, ctx, "position_m");
            spec.loss = optional_number(s, ctx, "loss", 1.0);
            cfg.scatterers.push_back(spec);
        }
    }

    if (auto it = j.find("reflectors"); it != j.end()) {
        if (!it->is_array()) fail(top, "reflectors must be an array");
        for (const auto& r : *it) {
            const std::string ctx = "reflectors[]";
            check_keys(r, ctx, {"plane", "sigma_z_m", "corr_len_m", "passivity", "loss_factor", "k_bar_target"});
            const PlaneSpec plane = parse_plane(require(r, ctx, "plane"), ctx + ".plane");
            RoughSurface surface(plane, require_number(r, ctx, "sigma_z_m"),
                                 optional_number(r, ctx, "corr_len_m", 0.0),
                                 optional_number(r, ctx, "passivity", 1.0),
                                 optional_number(r, ctx, "loss_factor", 1.0));
            ReflectorSpec spec{surface, std::nullopt};
            if (auto kb = r.find("k_bar_target"); kb != r.end()) spec.k_bar_target = kb->get<double>();
            cfg.reflectors.push_back(spec);
        }
    }

    if (auto it = j.find("pathloss"); it != j.end()) {
        const std::string ctx = "pathloss";
        check_keys(*it, ctx, {"beta_db", "d0_m", "exponent"});
        cfg.pathloss.beta_db = optional_number(*it, ctx, "beta_db", -68.0);
        cfg.pathloss.d0_m = optional_number(*it, ctx, "d0_m", 1.0);
        cfg.pathloss.exponent = optional_number(*it, ctx, "exponent", 2.0);
    }

    if (auto it = j.find("noise"); it != j.end()) {
        const std::string ctx = "noise";
        check_keys(*it, ctx, {"bandwidth_hz", "n0_dbm_hz", "noise_figure_db"});
        cfg.noise.bandwidth_hz = optional_number(*it, ctx, "bandwidth_hz", 0.0);
        cfg.noise.n0_dbm_hz = optional_number(*it, ctx, "n0_dbm_hz", -174.0);
        cfg.noise.noise_figure_db = optional_number(*it, ctx, "noise_figure_db", 0.0);
    }

    if (auto it = j.find("powers_dbm"); it != j.end()) {
        if (!it->is_array()) fail(top, "powers_dbm must be an array of numbers");
        for (const auto& p : *it) cfg.powers_dbm.push_back(p.get<double>());
    }

    if (auto it = j.find("oracle"); it != j.end()) {
        const std::string ctx = "oracle";
        check_keys(*it, ctx, {"grid_step_wavelengths", "realizations"});
        cfg.oracle.grid_step_wavelengths = optional_number(*it, ctx, "grid_step_wavelengths", 0.125);
        cfg.oracle.realizations = static_cast<std::size_t>(optional_number(*it, ctx, "realizations", 100));
    }

    if (auto it = j.find("experiments"); it != j.end()) {
        if (!it->is_object()) fail(top, "experiments must be an object");
        cfg.experiments_json = it->dump();
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("scenario: parse error in " + path + ": " + e.what());
    }
    return parse_scenario(j);
}

std::string ScenarioConfig::to_json() const {
    json j;
    j["frequency_hz"] = frequency_hz;
    j["seed"] = seed;
    j["bs_array"] = {{"center_m", vec3_json(bs_center)},   {"n_u", bs_n_u},
                     {"n_v", bs_n_v},                      {"spacing_m", bs_spacing_effective()},
                     {"axis_u", vec3_json(bs_axis_u)},     {"axis_v", vec3_json(bs_axis_v)}};
    j["users"] = json::array();
    for (const auto& u : users) j["users"].push_back({{"position_m", vec3_json(u.position)}, {"n_r", u.n_r}});
    j["scatterers"] = json::array();
    for (const auto& s : scatterers)
        j["scatterers"].push_back({{"position_m", vec3_json(s.position)}, {"loss", s.loss}});
    j["reflectors"] = json::array();
    for (const auto& r : reflectors) {
        json plane = {{"origin_m", vec3_json(r.surface.plane.origin())},
                      {"normal", vec3_json(r.surface.plane.normal())},
                      {"axis_u", vec3_json(r.surface.plane.axis_u())},
                      {"axis_v", vec3_json(r.surface.plane.axis_v())},
                      {"extent_u_m", r.surface.plane.extent_u()},
                      {"extent_v_m", r.surface.plane.extent_v()}};
        json rr = {{"plane", plane},
                   {"sigma_z_m", r.surface.sigma_z},
                   {"corr_len_m", r.surface.corr_len},
                   {"passivity", r.surface.passivity},
                   {"loss_factor", r.surface.loss_factor}};
        if (r.k_bar_target) rr["k_bar_target"] = *r.k_bar_target;
        j["reflectors"].push_back(rr);
    }
    j["pathloss"] = {{"beta_db", pathloss.beta_db}, {"d0_m", pathloss.d0_m}, {"exponent", pathloss.exponent}};
    j["noise"] = {{"bandwidth_hz", noise.bandwidth_hz},
                  {"n0_dbm_hz", noise.n0_dbm_hz},
                  {"noise_figure_db", noise.noise_figure_db}};
    j["powers_dbm"] = powers_dbm;
    j["oracle"] = {{"grid_step_wavelengths", oracle.grid_step_wavelengths},
                   {"realizations", oracle.realizations}};
    j["experiments"] = json::parse(experiments_json);
    (void)format_double;  // kept for CSV writers sharing this unit
    return j.dump(2);
}

namespace {

ArrayGeometry user_array(const UserSpec& user, double wavelength) {
    if (user.n_r == 1) return ArrayGeometry({user.position});
    // Multi-antenna users get a half-wavelength vertical ULA.
    return make_ula(user.position, user.n_r, 0.5 * wavelength, Point3(0, 0, 1));
}

}  // namespace

AssembledChannel assemble_channel(const ScenarioConfig& scenario, std::size_t user_index, std::uint64_t seed,
                                  const AssemblyOptions& opts) {
    if (user_index >= scenario.users.size()) throw std::invalid_argument("assemble_channel: user index out of range");
    const double lambda = scenario.wavelength();
    const double k = scenario.wavenumber();
    const ArrayGeometry tx = scenario.bs_array();
    const ArrayGeometry rx = user_array(scenario.users[user_index], lambda);
    const Point3 user_pos = scenario.users[user_index].position;
    const double d_los = (user_pos - tx.center()).norm();

    AssembledChannel out;
    out.gains.c0 = scenario.pathloss.amplitude(d_los);
    out.matrix.provenance = opts.include_stochastic ? Provenance::analytic_sampled
                                                    : Provenance::analytic_deterministic;
    out.matrix.entries = out.gains.c0 * los_matrix(tx, rx, k).entries;

    for (const auto& s : scenario.scatterers) {
        const double d_ts = (s.position - tx.center()).norm();
        const double d_sr = (user_pos - s.position).norm();
        const double beta = std::pow(10.0, scenario.pathloss.beta_db / 10.0);
        const double amp = s.loss * std::sqrt(beta) *
                           std::pow(d_ts / scenario.pathloss.d0_m, -0.5 * scenario.pathloss.exponent) *
                           std::pow(d_sr / scenario.pathloss.d0_m, -0.5 * scenario.pathloss.exponent);
        out.gains.c_hat.push_back(amp);
        out.gains.k_hat.push_back(amp / std::abs(out.gains.c0));
        out.matrix.entries += amp * scatterer_matrix(tx, rx, s.position, k).entries;
    }

    std::uint64_t reflector_counter = 0;
    for (const auto& r : scenario.reflectors) {
        const PlaneSpec& plane = r.surface.plane;
        double loss = r.surface.loss_factor;
        if (r.k_bar_target) {
            // Solve the Rician-factor identity k_bar = loss * d_los/d_virt at
            // the reference user (user 0).
            const Point3 ref_pos = scenario.users[0].position;
            const double ref_los = (ref_pos - tx.center()).norm();
            const double ref_virt = (mirror_point(ref_pos, plane) - tx.center()).norm();
            loss = *r.k_bar_target * ref_virt / ref_los;
            if (loss > 1.0)
                out.warnings.push_back("reflector k_bar_target implies loss_factor " + std::to_string(loss) +
                                       " > 1 (virtual path longer than LOS)");
        }

        const SpecularComponent spec = deterministic_reflector(tx, rx, r.surface, k);
        const double atten = std::exp(-0.5 * spec.g);
        const double k_bar_flat = loss * d_los / spec.mirror_distance;
        const double k_bar = k_bar_flat * atten;
        const std::complex<double> c_bar = out.gains.c0 * k_bar;
        out.gains.c_bar.push_back(c_bar);
        out.gains.k_bar.push_back(k_bar);
        out.matrix.entries += c_bar * spec.matrix.entries;

        // Stochastic scale: the stochastic/flat-specular amplitude ratio of the
        // reflector model, applied to the assembled flat specular factor.
        // Vanishes for smooth surfaces.
        const ReflectorModel model = make_reflector_model(tx, rx, r.surface, k);
        const double fade = 1.0 - atten;
        const double ratio = fade * std::sqrt(model.c_tilde_inf_sq) / std::abs(model.c_bar_flat);
        const double k_tilde = k_bar_flat * ratio;
        const double c_tilde = std::abs(out.gains.c0) * k_tilde;
        out.gains.k_tilde.push_back(k_tilde);
        out.gains.c_tilde_var.push_back(c_tilde * c_tilde);

        if (opts.include_stochastic && c_tilde > 0.0) {
            Rng rng(split_seed(seed, (user_index << 8) ^ reflector_counter));
            for (Eigen::Index m = 0; m < out.matrix.entries.rows(); ++m)
                for (Eigen::Index nn = 0; nn < out.matrix.entries.cols(); ++nn)
                    out.matrix.entries(m, nn) += c_tilde * rng.complex_normal();
        }
        ++reflector_counter;
    }
    return out;
}

std::vector<AssembledChannel> assemble_channels(const ScenarioConfig& scenario, std::uint64_t seed,
                                                const AssemblyOptions& opts) {
    std::vector<AssembledChannel> out;
    out.reserve(scenario.users.size());
    for (std::size_t u = 0; u < scenario.users.size(); ++u) out.push_back(assemble_channel(scenario, u, seed, opts));
    return out;
}

double sum_rate(const ScenarioConfig& scenario, ServingStrategy strategy, double total_power_w, std::uint64_t seed,
                const SumRateOptions& opts) {
    const std::size_t K = scenario.users.size();
    if (K == 0) throw std::invalid_argument("sum_rate: no users configured");
    if (strategy == ServingStrategy::nlos_only && scenario.reflectors.empty())
        throw std::invalid_argument("sum_rate: NLOS strategy requires a reflector");
    if (!(total_power_w >= 0.0)) throw std::invalid_argument("sum_rate: power must be >= 0");
    for (const auto& u : scenario.users)
        if (u.n_r != 1) throw std::invalid_argument("sum_rate: implemented for single-antenna users");

    const double k = scenario.wavenumber();
    const ArrayGeometry tx = scenario.bs_array();
    const double noise_w = scenario.noise.noise_power_w();
    const std::vector<AssembledChannel> channels = assemble_channels(scenario, seed, opts.assembly);

    std::vector<Beamformer> beams;
    beams.reserve(K);
    for (std::size_t u = 0; u < K; ++u) {
        Point3 focus = scenario.users[u].position;
        BeamKind kind = BeamKind::los_focus;
        if (strategy == ServingStrategy::nlos_only) {
            focus = mirror_point(focus, scenario.reflectors[0].surface.plane);
            kind = BeamKind::nlos_focus;
        }
        Beamformer q = nf_focus_beamformer(tx, focus, k, kind);
        if (opts.partitioned_array) {
            const Eigen::Index n = q.weights.size();
            const Eigen::Index chunk = n / static_cast<Eigen::Index>(K);
            const Eigen::Index begin = static_cast<Eigen::Index>(u) * chunk;
            const Eigen::Index end = (u + 1 == K) ? n : begin + chunk;
            q = restrict_beamformer(q, begin, end);
        }
        beams.push_back(std::move(q));
    }

    const double p_user = total_power_w / static_cast<double>(K);
    double rate = 0.0;
    for (std::size_t u = 0; u < K; ++u) {
        const Eigen::VectorXcd h = channels[u].matrix.entries.row(0).transpose();
        const double signal = std::norm(project(h, beams[u])) * p_user;
        double interference = 0.0;
        for (std::size_t v = 0; v < K; ++v)
            if (v != u) interference += std::norm(project(h, beams[v])) * p_user;
        rate += std::log2(1.0 + signal / (interference + noise_w));
    }
    return rate;
}

}  // namespace nfchan
