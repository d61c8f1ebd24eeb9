// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "nfchan/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "json_util.hpp"
#include "nfchan/hf_oracle.hpp"
#include "nfchan/rng.hpp"
#include "nfchan/special_functions.hpp"

namespace nfchan {

namespace {

using jsonutil::json;

constexpr std::uint64_t kExperimentSalt[8] = {0, 101, 102, 103, 104, 105, 106, 107};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json experiment_block(const ScenarioConfig& scenario, const std::string& name,
                      const std::set<std::string>& allowed) {
    const json all = json::parse(scenario.experiments_json);
    json block = json::object();
    if (auto it = all.find(name); it != all.end()) block = *it;
    jsonutil::check_keys(block, "experiments." + name, allowed);
    return block;
}

std::uint64_t experiment_seed(const ScenarioConfig& scenario, const RunOptions& opts, int experiment_id) {
    const std::uint64_t base = opts.has_seed_override ? opts.seed_override : scenario.seed;
    return split_seed(base, kExperimentSalt[experiment_id]);
}

std::size_t effective_realizations(std::size_t n, const RunOptions& opts) {
    return opts.fast ? std::max<std::size_t>(2, n / 2) : n;
}

double effective_grid_step(const ScenarioConfig& scenario, const RunOptions& opts) {
    const double base = scenario.oracle.grid_step_wavelengths * scenario.wavelength();
    return opts.fast ? 2.0 * base : base;
}

const ReflectorSpec& primary_reflector(const ScenarioConfig& scenario) {
    if (scenario.reflectors.empty())
        throw std::runtime_error("experiment requires a reflector in the scenario");
    return scenario.reflectors[0];
}

// Oracle evaluator for a single Tx/Rx pair, normalized by the flat-surface value.
struct NormalizedOracle {
    Point3 tx, rx;
    double wavenumber;
    HFConfig cfg;
    std::complex<double> flat;

    NormalizedOracle(const Point3& tx_, const Point3& rx_, const RoughSurface& surface, double grid_step,
                     double wavenumber_)
        : tx(tx_), rx(rx_), wavenumber(wavenumber_) {
        RoughSurface flat_surface(surface.plane, 0.0, 0.0, surface.passivity, surface.loss_factor);
        const SurfaceRealization real = sample_surface(flat_surface, grid_step, 0);
        flat = hf_coefficient(tx, rx, real, wavenumber, cfg);
    }

    std::complex<double> operator()(const SurfaceRealization& real) const {
        return hf_coefficient(tx, rx, real, wavenumber, cfg) / flat;
    }
};

}  // namespace

// --------------------------------------------------------------------------
// regimes: mean attenuation across the three roughness regimes
// --------------------------------------------------------------------------

RegimesResult compute_regimes(const ScenarioConfig& scenario, const RunOptions& opts) {
    const json block = experiment_block(scenario, "regimes", {"kappa_sigma_z", "rx_position_m"});
    const std::vector<double> ks = jsonutil::optional_number_array(block, "experiments.regimes", "kappa_sigma_z",
                                                                  {0.0, 0.25, 0.5, 1.0, 2.0, 3.0});
    const Point3 rx = jsonutil::optional_vec3(block, "experiments.regimes", "rx_position_m", Point3(0, 0, 1));

    const RoughSurface& base = primary_reflector(scenario).surface;
    const Point3 tx = scenario.bs_array().center();
    const double k = scenario.wavenumber();
    const double step = effective_grid_step(scenario, opts);
    const std::size_t n = effective_realizations(scenario.oracle.realizations, opts);
    const std::uint64_t seed = experiment_seed(scenario, opts, 1);

    const double kz = kappa_z(tx, rx, base.plane, k);

    // Scattered-floor amplitude relative to |c_bar(0)| (the very-rough asymptote).
    const ArrayGeometry tx_arr({tx});
    const ArrayGeometry rx_arr({rx});
    const ReflectorModel model = make_reflector_model(tx_arr, rx_arr, base, k);
    const double floor = std::sqrt(model.c_tilde_inf_sq) / std::abs(model.c_bar_flat);

    RegimesResult out;
    out.kappa_z_over_k = kz / k;
    out.realizations = n;
    out.grid_step = step;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double ksig = ks[i];
        RegimesRow row;
        row.kappa_sigma_z = ksig;
        const double sigma_z = ksig / k;
        const double g = kz * kz * sigma_z * sigma_z;
        row.theory_exp = std::exp(-0.5 * g);
        row.theory_floor = floor;
        if (ksig == 0.0) {
            row.mean = {1.0, 0.0};
            row.mean_abs = 1.0;
        } else {
            RoughSurface rough(base.plane, sigma_z, 0.0, base.passivity, base.loss_factor);
            const NormalizedOracle oracle(tx, rx, rough, step, k);
            const EnsembleSummary s = run_ensemble(oracle, rough, step, n, split_seed(seed, i));
            row.mean = s.mean;
            row.mean_abs = s.mean_abs;
        }
        out.rows.push_back(row);
    }
    return out;
}

// --------------------------------------------------------------------------
// pdf: distribution of the normalized coefficient
// --------------------------------------------------------------------------

PdfResult compute_pdf(const ScenarioConfig& scenario, const RunOptions& opts) {
    const json block = experiment_block(scenario, "pdf", {"kappa_sigma_z", "realizations", "rx_position_m"});
    const double ksig = jsonutil::optional_number(block, "experiments.pdf", "kappa_sigma_z", 3.0);
    const std::size_t n = effective_realizations(
        static_cast<std::size_t>(jsonutil::optional_number(block, "experiments.pdf", "realizations", 600)), opts);
    const Point3 rx = jsonutil::optional_vec3(block, "experiments.pdf", "rx_position_m", Point3(0, 0, 1));

    const RoughSurface& base = primary_reflector(scenario).surface;
    const Point3 tx = scenario.bs_array().center();
    const double k = scenario.wavenumber();
    const double step = effective_grid_step(scenario, opts);

    RoughSurface rough(base.plane, ksig / k, 0.0, base.passivity, base.loss_factor);
    const NormalizedOracle oracle(tx, rx, rough, step, k);
    PdfResult out{run_ensemble(oracle, rough, step, n, experiment_seed(scenario, opts, 2)), ksig, n};
    return out;
}

// --------------------------------------------------------------------------
// correlation: spatial correlation, aligned vs. perpendicular placements
// --------------------------------------------------------------------------

CorrelationResult compute_correlation(const ScenarioConfig& scenario, const RunOptions& opts) {
    const json block = experiment_block(scenario, "correlation",
                                        {"kappa_sigma_z", "rx_center_m", "d_over_lambda", "realizations"});
    const std::string ctx = "experiments.correlation";
    const double ksig = jsonutil::optional_number(block, ctx, "kappa_sigma_z", 3.0);
    const Point3 rx_center = jsonutil::optional_vec3(block, ctx, "rx_center_m", Point3(0, 0, 6));
    const std::vector<double> ds =
        jsonutil::optional_number_array(block, ctx, "d_over_lambda", {0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
    const std::size_t n = effective_realizations(
        static_cast<std::size_t>(jsonutil::optional_number(block, ctx, "realizations", 512)), opts);

    const RoughSurface& base = primary_reflector(scenario).surface;
    const PlaneSpec& plane = base.plane;
    const Point3 tx = scenario.bs_array().center();
    const double k = scenario.wavenumber();
    const double lambda = scenario.wavelength();
    const double step = effective_grid_step(scenario, opts);

    RoughSurface rough(plane, ksig / k, 0.0, base.passivity, base.loss_factor);

    // Aligned: along the surface-center-to-Rx direction. Perpendicular: an
    // in-plane axis orthogonal to it.
    const Point3 n_hat = (rx_center - plane.origin()).normalized();
    Point3 perp = plane.axis_v() - plane.axis_v().dot(n_hat) * n_hat;
    if (perp.norm() < 1e-9) perp = plane.axis_u() - plane.axis_u().dot(n_hat) * n_hat;
    perp.normalize();

    std::vector<Point3> positions;
    positions.push_back(rx_center);
    for (double d : ds) positions.push_back(rx_center + d * lambda * n_hat);
    for (double d : ds) positions.push_back(rx_center + d * lambda * perp);

    HFConfig cfg;
    MultiEvaluator evaluator = [&, positions](const SurfaceRealization& real) {
        return hf_coefficients(tx, positions, real, k, cfg);
    };
    const std::vector<std::complex<double>> corr =
        pairwise_correlation(evaluator, rough, step, n, experiment_seed(scenario, opts, 3));

    // Matched angular windows from the geometry: perpendicular window from the
    // surface half-extent along the displacement; aligned window from the
    // equivalent-disk radius.
    const double R = (rx_center - plane.origin()).norm();
    const double half_perp = 0.5 * (std::abs(perp.dot(plane.axis_v())) > 0.5 ? plane.extent_v() : plane.extent_u());
    const double theta_c_perp = 2.0 * std::asin(half_perp / std::hypot(half_perp, R));
    const double r_eff = std::sqrt(plane.area() / kPi);
    const double theta_c_aligned = std::atan(r_eff / R);

    CorrelationResult out;
    out.theta_c_perpendicular = theta_c_perp;
    out.theta_c_aligned = theta_c_aligned;
    out.realizations = n;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CorrelationRow row;
        row.d_over_lambda = ds[i];
        row.numeric_aligned = std::abs(corr[i]);
        row.numeric_perpendicular = std::abs(corr[ds.size() + i]);
        row.sinc_aligned = std::abs(correlation_aligned(ds[i] * lambda, theta_c_aligned, lambda));
        row.sinc_perpendicular = std::abs(correlation_perpendicular(ds[i] * lambda, theta_c_perp, lambda));
        out.rows.push_back(row);
    }
    return out;
}

// --------------------------------------------------------------------------
// length-correlation: power gain vs. the smoothness parameter S
// --------------------------------------------------------------------------

LengthCorrelationResult compute_length_correlation(const ScenarioConfig& scenario, const RunOptions& opts) {
    const json block = experiment_block(
        scenario, "length_correlation",
        {"kappa_sigma_z", "s_values", "realizations", "tx_position_m", "rx_position_m", "plane"});
    const std::string ctx = "experiments.length_correlation";
    const double ksig = jsonutil::optional_number(block, ctx, "kappa_sigma_z", 3.0);
    const std::vector<double> s_values = jsonutil::optional_number_array(
        block, ctx, "s_values", {0.01, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0});
    const std::size_t n = effective_realizations(
        static_cast<std::size_t>(jsonutil::optional_number(block, ctx, "realizations", 64)), opts);
    const Point3 tx = jsonutil::optional_vec3(block, ctx, "tx_position_m", Point3(0, 0, 12));
    const Point3 rx = jsonutil::optional_vec3(block, ctx, "rx_position_m", Point3(1.3488, 0, 11.9240));

    PlaneSpec plane = primary_reflector(scenario).surface.plane;
    if (auto it = block.find("plane"); it != block.end()) {
        jsonutil::check_keys(*it, ctx + ".plane", {"origin_m", "normal", "axis_u", "axis_v", "extent_u_m", "extent_v_m"});
        plane = PlaneSpec(jsonutil::require_vec3(*it, ctx, "origin_m"),
                          jsonutil::require_vec3(*it, ctx, "normal").normalized(),
                          jsonutil::require_vec3(*it, ctx, "axis_u").normalized(),
                          jsonutil::require_vec3(*it, ctx, "axis_v").normalized(),
                          jsonutil::require_number(*it, ctx, "extent_u_m"),
                          jsonutil::require_number(*it, ctx, "extent_v_m"));
    }

    const double k = scenario.wavenumber();
    const double lambda = scenario.wavelength();
    const double zeta = primary_reflector(scenario).surface.passivity;
    const double step = effective_grid_step(scenario, opts);
    const double sigma_z = ksig / k;
    const double kz = kappa_z(tx, rx, plane, k);
    const double kr = kappa_rho(tx, rx, plane, k);
    const std::uint64_t seed = experiment_seed(scenario, opts, 4);

    // Flat reference from the oracle itself.
    RoughSurface flat_surface(plane, 0.0, 0.0, zeta);
    HFConfig cfg;
    const double flat_power = std::norm(hf_coefficient(tx, rx, sample_surface(flat_surface, step, 0), k, cfg));

    // Theory curve, normalized by |c_bar(0)|^2.
    const ReflectorModel model = make_reflector_model(ArrayGeometry({tx}), ArrayGeometry({rx}),
                                                      RoughSurface(plane, sigma_z, 1.0, zeta), k);
    const double c_bar0_sq = std::norm(model.c_bar_flat);
    const CorrelatedPowerLaw law = make_correlated_power_law(c_bar0_sq, model.c_tilde_inf_sq);

    LengthCorrelationResult out;
    out.s_min = law.s_min;
    out.realizations = n;
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        const double s = s_values[i];
        const double ell = 2.0 * std::sqrt(s) * sigma_z * kz / kr;
        RoughSurface rough(plane, sigma_z, ell, zeta);
        const std::vector<std::complex<double>> samples = run_ensemble_samples(
            [&](const SurfaceRealization& real) { return hf_coefficient(tx, rx, real, k, cfg); }, rough, step, n,
            split_seed(seed, i));
        double power = 0.0;
        for (const auto& c : samples) power += std::norm(c);
        power /= static_cast<double>(samples.size());

        LengthCorrelationRow row;
        row.s = s;
        row.corr_len_m = ell;
        row.oracle_ratio = power / flat_power;
        row.theory_ratio = law.evaluate_s(s) / c_bar0_sq;
        out.rows.push_back(row);
    }
    return out;
}

// --------------------------------------------------------------------------
// sinr-tradeoff: closed-form two-user SINR trade-off
// --------------------------------------------------------------------------

namespace {

struct TradeoffGeometry {
    double a1 = 0.0, a2 = 0.0, b = 0.0;
    Point3 user1, user2, vuser1, vuser2;
};

TradeoffGeometry tradeoff_geometry(double phi0, double d1, double d2, double wall_offset, double k) {
    TradeoffGeometry g;
    // Users on the phi0 ray measured from the array axis (y), in the x-y plane.
    const Point3 dir(std::sin(phi0), std::cos(phi0), 0.0);
    g.user1 = d1 * dir;
    g.user2 = d2 * dir;
    // Wall parallel to the array axis, wall_offset behind user 2.
    const double xw = g.user2.x() + wall_offset;
    const PlaneSpec wall(Point3(xw, 0, 0), Point3(-1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1), 100.0, 100.0);
    g.vuser1 = mirror_point(g.user1, wall);
    g.vuser2 = mirror_point(g.user2, wall);

    g.a1 = k * 0.5 * std::sin(phi0) * std::sin(phi0) * std::abs(d2 - d1) / (d1 * d2);
    const double dv1 = g.vuser1.norm();
    const double dv2 = g.vuser2.norm();
    const double cos1 = g.vuser1.y() / dv1;
    const double cos2 = g.vuser2.y() / dv2;
    const double sin1_sq = 1.0 - cos1 * cos1;
    const double sin2_sq = 1.0 - cos2 * cos2;
    g.b = k * std::abs(cos1 - cos2);
    g.a2 = 0.5 * k * std::abs(sin1_sq / dv1 - sin2_sq / dv2);
    return g;
}

}  // namespace

TradeoffResult compute_sinr_tradeoff(const ScenarioConfig& scenario, const RunOptions& opts) {
    (void)opts;
    const json block = experiment_block(scenario, "sinr_tradeoff",
                                        {"phi0_rad", "d1_m", "d_fixed_m", "d_values_m", "d1_values_m",
                                         "wall_offset_m", "n_tx", "noise_ratio", "k_bar", "validation_d_max_m",
                                         "validation_d1_min_m"});
    const std::string ctx = "experiments.sinr_tradeoff";
    const double phi0 = jsonutil::optional_number(block, ctx, "phi0_rad", 0.75 * kPi);
    const double d1_fixed = jsonutil::optional_number(block, ctx, "d1_m", 5.0 * std::sqrt(2.0));
    const double d_fixed = jsonutil::optional_number(block, ctx, "d_fixed_m", 5.0);
    const double wall_offset = jsonutil::optional_number(block, ctx, "wall_offset_m", 1.0);
    const int n_tx = static_cast<int>(jsonutil::optional_number(block, ctx, "n_tx", 256));
    const double noise_ratio = jsonutil::optional_number(block, ctx, "noise_ratio", 0.1);
    const std::vector<double> k_bars = jsonutil::optional_number_array(block, ctx, "k_bar", {1.0, 0.6, 0.2});
    const std::vector<double> d_values =
        jsonutil::optional_number_array(block, ctx, "d_values_m", {0.25, 0.5, 1, 1.5, 2, 3, 4, 5, 7, 10});
    const std::vector<double> d1_values =
        jsonutil::optional_number_array(block, ctx, "d1_values_m", {3, 5, 7.0710678118654755, 10, 15, 20, 30});

    const double k = scenario.wavenumber();
    const double lambda = scenario.wavelength();
    const double ly = n_tx * 0.5 * lambda;
    const ArrayGeometry array = make_ula(Point3(0, 0, 0), n_tx, 0.5 * lambda, Point3(0, 1, 0));

    TradeoffResult out;
    out.n_tx = n_tx;
    out.noise_ratio = noise_ratio;
    out.validation_d_max = jsonutil::optional_number(block, ctx, "validation_d_max_m", 5.0);
    out.validation_d1_min = jsonutil::optional_number(block, ctx, "validation_d1_min_m", 5.0);

    auto evaluate = [&](double d1, double d2, double k_bar) {
        const TradeoffGeometry g = tradeoff_geometry(phi0, d1, d2, wall_offset, k);
        TradeoffRow row;
        row.sweep_value = 0.0;
        row.sinr_los = sinr_los_closed_form(g.a1, ly, noise_ratio);
        row.sinr_nlos = sinr_nlos_closed_form(g.a2, g.b, ly, k_bar, noise_ratio);
        row.sinr_los_discrete = discrete_two_user_sinr(array, g.user1, g.user2, k, noise_ratio);
        row.sinr_nlos_discrete =
            discrete_two_user_sinr(array, g.vuser1, g.vuser2, k, noise_ratio / (k_bar * k_bar));
        return row;
    };

    for (double k_bar : k_bars) {
        TradeoffSweep sweep_d;
        sweep_d.sweep_name = "d";
        sweep_d.k_bar = k_bar;
        for (double d : d_values) {
            TradeoffRow row = evaluate(d1_fixed, d1_fixed + d, k_bar);
            row.sweep_value = d;
            sweep_d.rows.push_back(row);
        }
        out.sweeps.push_back(std::move(sweep_d));

        TradeoffSweep sweep_d1;
        sweep_d1.sweep_name = "d1";
        sweep_d1.k_bar = k_bar;
        for (double d1 : d1_values) {
            TradeoffRow row = evaluate(d1, d1 + d_fixed, k_bar);
            row.sweep_value = d1;
            sweep_d1.rows.push_back(row);
        }
        out.sweeps.push_back(std::move(sweep_d1));
    }
    return out;
}

// --------------------------------------------------------------------------
// smr: side-lobe-to-main-lobe ratio vs. BS aperture length
// --------------------------------------------------------------------------

SmrResult compute_smr(const ScenarioConfig& scenario, const RunOptions& opts) {
    (void)opts;
    const json block = experiment_block(scenario, "smr", {"ly_values_m", "k_bar"});
    const std::string ctx = "experiments.smr";
    const std::vector<double> ly_values = jsonutil::optional_number_array(
        block, ctx, "ly_values_m", {0.025, 0.05, 0.075, 0.1, 0.125, 0.15, 0.2, 0.25, 0.3});
    const double k_bar_req = jsonutil::optional_number(block, ctx, "k_bar", 1.0);

    if (scenario.users.size() < 2) throw std::runtime_error("smr experiment needs two users");
    const ReflectorSpec& refl = primary_reflector(scenario);
    const double k = scenario.wavenumber();
    const double spacing = scenario.bs_spacing_effective();

    SmrResult out;
    for (double ly : ly_values) {
        const int n_y = std::max(2, static_cast<int>(std::lround(ly / spacing)) + 1);
        const ArrayGeometry tx = make_upa(scenario.bs_center, n_y, scenario.bs_n_v, spacing, scenario.bs_axis_u,
                                          scenario.bs_axis_v);

        const Point3 u1 = scenario.users[0].position;
        const Point3 u2 = scenario.users[1].position;
        const ArrayGeometry rx1({u1});

        const SpecularComponent spec = deterministic_reflector(tx, rx1, refl.surface, k);
        const Eigen::VectorXcd h_los = los_matrix(tx, rx1, k).entries.row(0).transpose();
        const Eigen::VectorXcd h_nlos = k_bar_req * spec.matrix.entries.row(0).transpose();

        const Beamformer q1 = nf_focus_beamformer(tx, u1, k);
        const Beamformer q2 = nf_focus_beamformer(tx, u2, k);

        SmrRow row;
        row.ly_m = (n_y - 1) * spacing;
        row.n_y = n_y;
        row.smr_desired_db = 10.0 * std::log10(smr(h_los, h_nlos, q1));
        row.smr_interference_db = 10.0 * std::log10(smr(h_los, h_nlos, q2));
        out.rows.push_back(row);
    }
    return out;
}

// --------------------------------------------------------------------------
// sumrate: sum rate vs. transmit power
// --------------------------------------------------------------------------

SumRateResult compute_sumrate(const ScenarioConfig& scenario, const RunOptions& opts) {
    const json block = experiment_block(scenario, "sumrate", {"k_bar"});
    const std::vector<double> k_bars =
        jsonutil::optional_number_array(block, "experiments.sumrate", "k_bar", {1.0, 0.6, 0.2});
    if (scenario.powers_dbm.empty())
        throw std::runtime_error("sumrate experiment needs powers_dbm in the scenario");

    const std::uint64_t seed = experiment_seed(scenario, opts, 7);
    SumRateResult out;
    for (double k_bar : k_bars) {
        ScenarioConfig cfg = scenario;
        if (cfg.reflectors.empty()) throw std::runtime_error("sumrate experiment needs a reflector");
        // The swept labels are the wall's specular-direction loss values; the
        // reported Rician factor additionally carries the longer virtual path.
        cfg.reflectors[0].k_bar_target.reset();
        cfg.reflectors[0].surface.loss_factor = k_bar;
        SumRateSweep sweep;
        sweep.k_bar = k_bar;
        for (double pt_dbm : scenario.powers_dbm) {
            const double pt_w = std::pow(10.0, (pt_dbm - 30.0) / 10.0);
            SumRateRow row;
            row.pt_dbm = pt_dbm;
            row.rate_los = sum_rate(cfg, ServingStrategy::los_only, pt_w, seed);
            row.rate_nlos = sum_rate(cfg, ServingStrategy::nlos_only, pt_w, seed);
            sweep.rows.push_back(row);
        }
        out.sweeps.push_back(std::move(sweep));
    }
    return out;
}

// --------------------------------------------------------------------------
// Orchestration
// --------------------------------------------------------------------------

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::FILE* f = std::fopen(tmp.c_str(), "wb");
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        if (std::fwrite(contents.data(), 1, contents.size(), f) != contents.size()) {
            std::fclose(f);
            throw std::runtime_error("short write to " + tmp.string());
        }
        if (std::fclose(f) != 0) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

std::string sidecar_json(const ScenarioConfig& scenario, const RunOptions& opts, const std::string& name,
                         const std::string& extra = "{}") {
    json j;
    j["experiment"] = name;
    j["fast"] = opts.fast;
    j["seed"] = opts.has_seed_override ? opts.seed_override : scenario.seed;
    j["scenario"] = json::parse(scenario.to_json());
    j["details"] = json::parse(extra);
    return j.dump(2);
}

std::string csv_of_regimes(const RegimesResult& r) {
    std::string out = "kappa_sigma_z,mean_re,mean_im,mean_abs,theory_exp,theory_floor\n";
    for (const auto& row : r.rows)
        out += fmt(row.kappa_sigma_z) + "," + fmt(row.mean.real()) + "," + fmt(row.mean.imag()) + "," +
               fmt(row.mean_abs) + "," + fmt(row.theory_exp) + "," + fmt(row.theory_floor) + "\n";
    return out;
}

std::string csv_of_pdf(const PdfResult& r) {
    std::string out = "bin_lo,bin_hi,count_re,count_im\n";
    const auto& s = r.summary;
    for (std::size_t i = 0; i + 1 < s.hist_edges.size(); ++i)
        out += fmt(s.hist_edges[i]) + "," + fmt(s.hist_edges[i + 1]) + "," + std::to_string(s.hist_re[i]) + "," +
               std::to_string(s.hist_im[i]) + "\n";
    return out;
}

std::string csv_of_correlation(const CorrelationResult& r) {
    std::string out = "d_over_lambda,numeric_P,numeric_A,sinc_P,sinc_A\n";
    for (const auto& row : r.rows)
        out += fmt(row.d_over_lambda) + "," + fmt(row.numeric_perpendicular) + "," + fmt(row.numeric_aligned) +
               "," + fmt(row.sinc_perpendicular) + "," + fmt(row.sinc_aligned) + "\n";
    return out;
}

std::string csv_of_length(const LengthCorrelationResult& r) {
    std::string out = "S,ell_m,oracle_ratio,theory_ratio\n";
    for (const auto& row : r.rows)
        out += fmt(row.s) + "," + fmt(row.corr_len_m) + "," + fmt(row.oracle_ratio) + "," + fmt(row.theory_ratio) +
               "\n";
    return out;
}

std::string csv_of_tradeoff(const TradeoffSweep& sweep) {
    std::string out = sweep.sweep_name + "_m,sinr_los,sinr_nlos,sinr_los_discrete,sinr_nlos_discrete\n";
    for (const auto& row : sweep.rows)
        out += fmt(row.sweep_value) + "," + fmt(row.sinr_los) + "," + fmt(row.sinr_nlos) + "," +
               fmt(row.sinr_los_discrete) + "," + fmt(row.sinr_nlos_discrete) + "\n";
    return out;
}

std::string csv_of_smr(const SmrResult& r) {
    std::string out = "ly_m,n_y,smr_desired_db,smr_interference_db\n";
    for (const auto& row : r.rows)
        out += fmt(row.ly_m) + "," + std::to_string(row.n_y) + "," + fmt(row.smr_desired_db) + "," +
               fmt(row.smr_interference_db) + "\n";
    return out;
}

std::string csv_of_sumrate(const SumRateSweep& sweep) {
    std::string out = "Pt_dBm,rate_los,rate_nlos\n";
    for (const auto& row : sweep.rows)
        out += fmt(row.pt_dbm) + "," + fmt(row.rate_los) + "," + fmt(row.rate_nlos) + "\n";
    return out;
}

std::string kbar_tag(double k_bar) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", k_bar);
    std::string s = buf;
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

}  // namespace

int run_experiment(const std::string& name, const ScenarioConfig& scenario, const std::string& out_dir,
                   const RunOptions& opts) {
    namespace fs = std::filesystem;
    try {
        fs::create_directories(out_dir);
        const fs::path dir(out_dir);
        if (name == "regimes") {
            const RegimesResult r = compute_regimes(scenario, opts);
            write_file_atomic((dir / "regimes.csv").string(), csv_of_regimes(r));
            json extra{{"kappa_z_over_k", r.kappa_z_over_k}, {"realizations", r.realizations},
                       {"grid_step_m", r.grid_step}};
            write_file_atomic((dir / "regimes_config.json").string(),
                              sidecar_json(scenario, opts, name, extra.dump()));
        } else if (name == "pdf") {
            const PdfResult r = compute_pdf(scenario, opts);
            write_file_atomic((dir / "pdf.csv").string(), csv_of_pdf(r));
            json extra{{"kappa_sigma_z", r.kappa_sigma_z},
                       {"realizations", r.realizations},
                       {"summary", json::parse(r.summary.to_json())}};
            write_file_atomic((dir / "pdf_config.json").string(), sidecar_json(scenario, opts, name, extra.dump()));
        } else if (name == "correlation") {
            const CorrelationResult r = compute_correlation(scenario, opts);
            write_file_atomic((dir / "correlation.csv").string(), csv_of_correlation(r));
            json extra{{"theta_c_perpendicular", r.theta_c_perpendicular},
                       {"theta_c_aligned", r.theta_c_aligned},
                       {"realizations", r.realizations}};
            write_file_atomic((dir / "correlation_config.json").string(),
                              sidecar_json(scenario, opts, name, extra.dump()));
        } else if (name == "length-correlation") {
            const LengthCorrelationResult r = compute_length_correlation(scenario, opts);
            write_file_atomic((dir / "length_correlation.csv").string(), csv_of_length(r));
            json extra{{"s_min", r.s_min}, {"realizations", r.realizations}};
            write_file_atomic((dir / "length_correlation_config.json").string(),
                              sidecar_json(scenario, opts, name, extra.dump()));
        } else if (name == "sinr-tradeoff") {
            const TradeoffResult r = compute_sinr_tradeoff(scenario, opts);
            for (const auto& sweep : r.sweeps) {
                const std::string file =
                    "sinr_tradeoff_" + sweep.sweep_name + "_kbar" + kbar_tag(sweep.k_bar) + ".csv";
                write_file_atomic((dir / file).string(), csv_of_tradeoff(sweep));
            }
            json extra{{"n_tx", r.n_tx}, {"noise_ratio", r.noise_ratio}};
            write_file_atomic((dir / "sinr_tradeoff_config.json").string(),
                              sidecar_json(scenario, opts, name, extra.dump()));
        } else if (name == "smr") {
            const SmrResult r = compute_smr(scenario, opts);
            write_file_atomic((dir / "smr.csv").string(), csv_of_smr(r));
            write_file_atomic((dir / "smr_config.json").string(), sidecar_json(scenario, opts, name));
        } else if (name == "sumrate") {
            const SumRateResult r = compute_sumrate(scenario, opts);
            for (const auto& sweep : r.sweeps) {
                const std::string file = "sumrate_kbar" + kbar_tag(sweep.k_bar) + ".csv";
                write_file_atomic((dir / file).string(), csv_of_sumrate(sweep));
            }
            write_file_atomic((dir / "sumrate_config.json").string(), sidecar_json(scenario, opts, name));
        } else {
            std::fprintf(stderr, "unknown experiment '%s'\n", name.c_str());
            return 1;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
    return 0;
}

}  // namespace nfchan
