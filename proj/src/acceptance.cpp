// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "nfchan/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "nfchan/channel_model.hpp"
#include "nfchan/experiments.hpp"
#include "nfchan/hf_oracle.hpp"
#include "nfchan/multiuser.hpp"
#include "nfchan/rng.hpp"
#include "nfchan/scenario.hpp"
#include "nfchan/special_functions.hpp"

namespace nfchan {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& message) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += message;
        }
    }
    void note(const std::string& message) {
        if (!detail.empty()) detail += "; ";
        detail += message;
    }
};

ScenarioConfig load(const AcceptanceOptions& opts, const char* file) {
    return load_scenario(opts.scenario_dir + "/" + file);
}

RunOptions run_opts(const AcceptanceOptions& opts) {
    RunOptions r;
    r.fast = opts.fast;
    return r;
}

// --- Criterion 1: mean attenuation law across the roughness regimes ------------

CriterionResult criterion_mean_law(const AcceptanceOptions& opts) {
    const double tol = opts.fast ? 0.10 : 0.05;
    Check c;
    const ScenarioConfig scenario = load(opts, "paper_va.json");
    const RegimesResult r = compute_regimes(scenario, run_opts(opts));
    double worst = 0.0;
    for (const auto& row : r.rows) {
        // The criterion grid; the configured sweep may sample more points.
        const bool in_grid = row.kappa_sigma_z == 0.0 || row.kappa_sigma_z == 0.5 || row.kappa_sigma_z == 1.0 ||
                             row.kappa_sigma_z == 2.0 || row.kappa_sigma_z == 3.0;
        const double err = std::abs(row.mean - std::complex<double>(row.theory_exp, 0.0));
        if (in_grid) worst = std::max(worst, err);
        c.require(!in_grid || err <= tol,
                  "kappa*sigma_z=" + fmt(row.kappa_sigma_z) + ": |mean - exp(-g/2)| = " + fmt(err));
    }
    c.note("max |mean - exp(-g/2)| = " + fmt(worst) + " (tol " + fmt(tol) + ", n=" +
           std::to_string(r.realizations) + ")");
    return {"C1", "mean-attenuation law exp(-g/2)", c.pass, c.detail};
}

// --- Criterion 2: Gaussianity of the scattered coefficient ------------------------

CriterionResult criterion_gaussianity(const AcceptanceOptions& opts) {
    Check c;
    const ScenarioConfig scenario = load(opts, "paper_va.json");
    const PdfResult r = compute_pdf(scenario, run_opts(opts));
    c.require(r.realizations >= 500 || opts.fast, "needs >= 500 realizations");
    const NormalityReport rep = normality_check(r.summary);
    c.require(!rep.degenerate, "degenerate ensemble");
    c.require(std::abs(rep.skew_re) < 0.3, "|skew_re| = " + fmt(std::abs(rep.skew_re)));
    c.require(std::abs(rep.skew_im) < 0.3, "|skew_im| = " + fmt(std::abs(rep.skew_im)));
    c.require(std::abs(rep.kurt_re) < 0.5, "|ex.kurt_re| = " + fmt(std::abs(rep.kurt_re)));
    c.require(std::abs(rep.kurt_im) < 0.5, "|ex.kurt_im| = " + fmt(std::abs(rep.kurt_im)));
    c.note("skew (" + fmt(rep.skew_re) + ", " + fmt(rep.skew_im) + "), ex.kurt (" + fmt(rep.kurt_re) + ", " +
           fmt(rep.kurt_im) + "), n=" + std::to_string(r.realizations));
    return {"C2", "Gaussianity of the scattered coefficient", c.pass, c.detail};
}

// --- Criterion 3: spatial correlation against the sinc closed forms ----------------

CriterionResult criterion_correlation(const AcceptanceOptions& opts) {
    const double tol = opts.fast ? 0.2 : 0.1;
    Check c;
    const ScenarioConfig scenario = load(opts, "paper_va.json");
    const CorrelationResult r = compute_correlation(scenario, run_opts(opts));
    double worst = 0.0;
    for (const auto& row : r.rows) {
        const double err_p = std::abs(row.numeric_perpendicular - row.sinc_perpendicular);
        const double err_a = std::abs(row.numeric_aligned - row.sinc_aligned);
        worst = std::max({worst, err_p, err_a});
        c.require(err_p <= tol, "d=" + fmt(row.d_over_lambda) + "L perpendicular err " + fmt(err_p));
        c.require(err_a <= tol, "d=" + fmt(row.d_over_lambda) + "L aligned err " + fmt(err_a));
        c.require(row.numeric_aligned >= row.numeric_perpendicular,
                  "aligned < perpendicular at d=" + fmt(row.d_over_lambda) + "L");
    }
    c.note("max |oracle - sinc| = " + fmt(worst) + " (tol " + fmt(tol) + ", n=" + std::to_string(r.realizations) +
           ")");
    return {"C3", "spatial correlation vs sinc closed forms", c.pass, c.detail};
}

// --- Criterion 4: surface-length correlation power law ------------------------------

CriterionResult criterion_power_law(const AcceptanceOptions& opts) {
    const double factor = opts.fast ? 3.0 : 2.0;
    Check c;
    const ScenarioConfig scenario = load(opts, "paper_va.json");
    const LengthCorrelationResult r = compute_length_correlation(scenario, run_opts(opts));
    double worst = 1.0;
    for (const auto& row : r.rows) {
        const double ratio = row.oracle_ratio / row.theory_ratio;
        worst = std::max(worst, std::max(ratio, 1.0 / ratio));
        c.require(ratio <= factor && ratio >= 1.0 / factor,
                  "S=" + fmt(row.s) + ": oracle/theory = " + fmt(ratio));
    }
    c.note("worst oracle/theory factor = " + fmt(worst) + " (allowed " + fmt(factor) + ")");

    // Branch continuity of the piecewise law, exact by construction.
    const CorrelatedPowerLaw law = make_correlated_power_law(1.0, 0.1);
    const double eps = 1e-12;
    const double jump_1 = std::abs(law.evaluate_s(1.0 - eps) - law.evaluate_s(1.0 + eps));
    const double jump_min = std::abs(law.evaluate_s(law.s_min * (1.0 - 1e-12)) -
                                     law.evaluate_s(law.s_min * (1.0 + 1e-12)));
    c.require(jump_1 < 1e-10, "discontinuity at S=1: " + fmt(jump_1));
    c.require(jump_min < 1e-10, "discontinuity at S=S_min: " + fmt(jump_min));
    return {"C4", "surface-length correlation power law", c.pass, c.detail};
}

// --- Criterion 5: closed-form vs discrete SINR --------------------------------------

CriterionResult criterion_closed_forms(const AcceptanceOptions& opts) {
    Check c;
    const ScenarioConfig scenario = load(opts, "paper_fig3.json");
    const TradeoffResult r = compute_sinr_tradeoff(scenario, run_opts(opts));
    c.require(r.n_tx >= 256, "criterion requires N_tx >= 256");
    double worst = 0.0;
    int checked = 0;
    for (const auto& sweep : r.sweeps) {
        for (const auto& row : sweep.rows) {
            // Points within the validity range of the quadratic phase
            // expansion; outside it the expansion itself breaks down.
            const bool in_range = sweep.sweep_name == "d" ? row.sweep_value <= r.validation_d_max
                                                          : row.sweep_value >= r.validation_d1_min;
            if (!in_range) continue;
            ++checked;
            const double rel_los = std::abs(row.sinr_los - row.sinr_los_discrete) / row.sinr_los_discrete;
            const double rel_nlos = std::abs(row.sinr_nlos - row.sinr_nlos_discrete) / row.sinr_nlos_discrete;
            worst = std::max({worst, rel_los, rel_nlos});
            c.require(rel_los <= 0.03, sweep.sweep_name + "=" + fmt(row.sweep_value) + " LOS rel err " +
                                           fmt(rel_los));
            c.require(rel_nlos <= 0.03, sweep.sweep_name + "=" + fmt(row.sweep_value) + " (k=" +
                                            fmt(sweep.k_bar) + ") NLOS rel err " + fmt(rel_nlos));
        }
    }
    c.require(checked >= 10, "too few validation points");
    c.note("worst closed-form vs discrete rel err = " + fmt(worst) + " over " + std::to_string(checked) +
           " points (tol 0.03, N_tx=" + std::to_string(r.n_tx) + ")");

    // Dual-route agreement of the quadratic-phase integral.
    Rng rng(20240915);
    double worst_q = 0.0;
    for (int i = 0; i < 128; ++i) {
        const double a = (rng.uniform() * 2.0 - 1.0) * 2.0e3;
        const double b = (rng.uniform() * 2.0 - 1.0) * 600.0;
        const double L = 0.1 + rng.uniform() * 2.9;
        const std::complex<double> closed = quad_phase_integral(a, b, L);
        const std::complex<double> quad = quad_phase_integral_quadrature(a, b, L, 1e-10);
        const double rel = std::abs(closed - quad) / std::max(1e-30, std::abs(quad));
        worst_q = std::max(worst_q, rel);
    }
    c.require(worst_q <= 1e-8, "erfi vs quadrature rel err " + fmt(worst_q));
    c.note("erfi-vs-quadrature worst rel err = " + fmt(worst_q));
    return {"C5", "closed-form vs discrete SINR consistency", c.pass, c.detail};
}

// --- Criterion 6: LOS/NLOS serving trade-off -----------------------------------------

CriterionResult criterion_tradeoff(const AcceptanceOptions& opts) {
    Check c;
    const ScenarioConfig scenario = load(opts, "paper_fig3.json");
    const TradeoffResult r = compute_sinr_tradeoff(scenario, run_opts(opts));

    bool nlos_wins_somewhere = false;
    bool los_wins_somewhere = false;
    bool crossover_found = false;
    for (const auto& sweep : r.sweeps) {
        bool nlos_here = false, los_here = false;
        for (const auto& row : sweep.rows) {
            if (row.sinr_nlos > row.sinr_los) nlos_here = true;
            if (row.sinr_los > row.sinr_nlos) los_here = true;
        }
        nlos_wins_somewhere |= nlos_here;
        los_wins_somewhere |= los_here;
        if (nlos_here && los_here) crossover_found = true;

        if (sweep.sweep_name == "d") {
            // Small inter-user separation: the NLOS path should win.
            c.require(sweep.rows.front().sinr_nlos > sweep.rows.front().sinr_los ||
                          sweep.k_bar < 0.5,  // heavily attenuated walls may not
                      "k=" + fmt(sweep.k_bar) + ": NLOS does not win at smallest d");
        }
        if (sweep.sweep_name == "d1") {
            c.require(sweep.rows.back().sinr_nlos > sweep.rows.back().sinr_los || sweep.k_bar < 0.5,
                      "k=" + fmt(sweep.k_bar) + ": NLOS does not win at largest d1");
        }
    }
    c.require(nlos_wins_somewhere, "no regime with SINR_NLOS > SINR_LOS");
    c.require(los_wins_somewhere, "no regime with SINR_LOS > SINR_NLOS");
    c.require(crossover_found, "no sweep exhibits a crossover");
    c.note("crossover present; NLOS preferred at small d / large d1");
    return {"C6", "LOS/NLOS SINR trade-off (qualitative)", c.pass, c.detail};
}

// --- Criterion 7: side-lobe-to-main-lobe threshold -------------------------------------

CriterionResult criterion_smr(const AcceptanceOptions& opts) {
    Check c;
    const ScenarioConfig scenario = load(opts, "paper_vb.json");
    const SmrResult r = compute_smr(scenario, run_opts(opts));
    c.require(r.rows.size() >= 3, "needs at least 3 aperture samples");

    // Qualitative monotone trend: negative slope of SMR(dB) vs log2(Ly).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(r.rows.size());
    for (const auto& row : r.rows) {
        const double x = std::log2(row.ly_m);
        sx += x;
        sy += row.smr_desired_db;
        sxx += x * x;
        sxy += x * row.smr_desired_db;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    c.require(slope < 0.0, "SMR trend is not decreasing (slope " + fmt(slope) + " dB/octave)");

    // Smallest sampled aperture beyond which SMR stays below -20 dB (side
    // lobes oscillate, so a sustained crossing is the meaningful threshold).
    double sustained = -1.0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        bool all_below = true;
        for (std::size_t j = i; j < r.rows.size(); ++j) all_below &= r.rows[j].smr_desired_db < -20.0;
        if (all_below) {
            sustained = r.rows[i].ly_m;
            break;
        }
    }
    c.require(sustained > 0.0 && sustained <= 0.30, "SMR does not stay below -20 dB from some Ly <= 30 cm");
    c.require(r.rows.back().smr_desired_db < -20.0, "SMR at the largest Ly is above -20 dB");
    c.note("slope " + fmt(slope) + " dB/octave, sustained -20 dB threshold at Ly = " + fmt(sustained) + " m");
    return {"C7", "side-lobe-to-main-lobe threshold", c.pass, c.detail};
}

// --- Criterion 8: multi-user sum-rate crossover ------------------------------------------

CriterionResult criterion_sumrate(const AcceptanceOptions& opts) {
    Check c;
    const ScenarioConfig scenario = load(opts, "paper_vb.json");
    const SumRateResult r = compute_sumrate(scenario, run_opts(opts));

    std::vector<std::pair<double, double>> crossovers;  // (k_bar, Pt_dBm of first NLOS win)
    for (const auto& sweep : r.sweeps) {
        const auto& rows = sweep.rows;
        c.require(rows.size() >= 3, "sweep too short");
        c.require(rows.front().rate_los > rows.front().rate_nlos,
                  "k=" + fmt(sweep.k_bar) + ": LOS does not win at the lowest power");
        c.require(rows.back().rate_nlos > rows.back().rate_los,
                  "k=" + fmt(sweep.k_bar) + ": NLOS does not win at the highest power");
        double crossing = rows.back().pt_dbm;
        bool crossed = false;
        for (const auto& row : rows) {
            if (!crossed && row.rate_nlos > row.rate_los) {
                crossing = row.pt_dbm;
                crossed = true;
            }
            if (crossed)
                c.require(row.rate_nlos >= row.rate_los,
                          "k=" + fmt(sweep.k_bar) + ": ordering not single-crossing at " + fmt(row.pt_dbm) +
                              " dBm");
        }
        c.require(crossed, "k=" + fmt(sweep.k_bar) + ": no crossover");
        crossovers.emplace_back(sweep.k_bar, crossing);
    }
    for (std::size_t i = 1; i < crossovers.size(); ++i) {
        c.require(crossovers[i].first < crossovers[i - 1].first, "k_bar sweep must be decreasing");
        c.require(crossovers[i].second >= crossovers[i - 1].second,
                  "crossover power does not increase as k_bar decreases");
    }
    std::string xs;
    for (const auto& [kb, px] : crossovers) xs += " k=" + fmt(kb) + "->" + fmt(px) + "dBm";
    c.note("crossovers:" + xs);
    return {"C8", "multi-user sum-rate crossover", c.pass, c.detail};
}

// --- Criterion 9: unit/property suite -----------------------------------------------------

CriterionResult criterion_invariants(const AcceptanceOptions& opts) {
    Check c;

    // Characteristic-function Monte Carlo oracle: mean of e^{-j z}, z ~ N(0, g),
    // against the attenuation e^{-g/2}.
    for (double g : {0.25, 1.0, 4.0}) {
        Rng rng(424242);
        const double sigma = std::sqrt(g);
        std::complex<double> mean(0.0, 0.0);
        const int n = 1000000;
        for (int i = 0; i < n; ++i) {
            const double z = sigma * rng.normal();
            mean += std::complex<double>(std::cos(z), -std::sin(z));
        }
        mean /= static_cast<double>(n);
        const double err = std::abs(mean - std::complex<double>(std::exp(-0.5 * g), 0.0));
        c.require(err <= 0.002, "attenuation MC at g=" + fmt(g) + ": err " + fmt(err));
    }

    // Mirror involution and distance symmetry on random geometry.
    {
        Rng rng(7);
        const PlaneSpec plane(Point3(0.3, -0.2, 0.5), Point3(0, 0, 1), Point3(1, 0, 0), Point3(0, 1, 0), 2.0, 3.0);
        double worst = 0.0, worst_sym = 0.0;
        for (int i = 0; i < 500; ++i) {
            const Point3 p(rng.normal() * 5, rng.normal() * 5, rng.normal() * 5);
            const Point3 q(rng.normal() * 5, rng.normal() * 5, rng.normal() * 5);
            worst = std::max(worst, (mirror_point(mirror_point(p, plane), plane) - p).norm());
            worst_sym = std::max(worst_sym, std::abs((mirror_point(p, plane) - q).norm() -
                                                     (p - mirror_point(q, plane)).norm()));
        }
        c.require(worst <= 1e-12, "mirror involution err " + fmt(worst));
        c.require(worst_sym <= 1e-9, "mirror distance symmetry err " + fmt(worst_sym));
    }

    // Quadratic-phase integral properties on a random grid.
    {
        Rng rng(11);
        for (int i = 0; i < 64; ++i) {
            const double a = (rng.uniform() * 2 - 1) * 500;
            const double b = (rng.uniform() * 2 - 1) * 200;
            const double L = 0.2 + rng.uniform() * 2.0;
            const auto v = quad_phase_integral(a, b, L);
            c.require(std::abs(v) <= 1.0 + 1e-12, "|quad_phase| > 1");
            const auto conj_pair = std::conj(quad_phase_integral(-a, b, L));
            const auto flipped = quad_phase_integral(a, -b, L);
            c.require(std::abs(conj_pair - flipped) <= 1e-10, "conjugate-pair symmetry violated");
        }
    }

    // Piecewise law: S_min root quality and continuity for a synthetic ratio.
    {
        const CorrelatedPowerLaw law = make_correlated_power_law(1.0, 0.1);
        const double resid = std::abs(law.s_min * std::exp(1.0 - law.s_min) - 0.1);
        c.require(resid <= 1e-10, "S_min residual " + fmt(resid));
    }

    // kappa_rho: the harmonic-fit variant must match the numerical amplitude fit.
    {
        const PlaneSpec plane(Point3(0, 0, 0), Point3(0, 0, 1), Point3(1, 0, 0), Point3(0, 1, 0), 2.0, 2.0);
        const Point3 tx(1.0, 0.5, 3.0), rx(-0.7, 1.1, 2.0);
        const double k = 100.0;
        const double fit = k * in_plane_gradient_amplitude_fit(tx, rx, plane);
        const double selected = kappa_rho(tx, rx, plane, k);
        c.require(std::abs(selected - fit) <= 1e-9 * std::max(1.0, fit),
                  "kappa_rho fit mismatch: " + fmt(selected) + " vs " + fmt(fit));
        c.require(std::abs(kappa_rho(rx, tx, plane, k) - selected) <= 1e-9, "kappa_rho tx/rx swap asymmetry");
    }

    const ScenarioConfig va = load(opts, "paper_va.json");
    const double lambda = va.wavelength();
    const double k = va.wavenumber();
    const RoughSurface& surface = va.reflectors[0].surface;
    const Point3 tx = va.bs_array().center();
    const Point3 rx(0, 0, 1);

    // Flat-surface oracle vs image-theory field level (5%).
    {
        const double step = (opts.fast ? 0.25 : 0.125) * lambda;
        const SurfaceRealization real = sample_surface(surface, step, 0);
        const std::complex<double> flat = hf_coefficient(tx, rx, real, k);
        const SpecularComponent spec =
            deterministic_reflector(ArrayGeometry({tx}), ArrayGeometry({rx}), surface, k);
        const double rel = std::abs(std::abs(flat) - spec.field_magnitude) / spec.field_magnitude;
        c.require(rel <= 0.05, "flat oracle vs image field level rel err " + fmt(rel));
        c.note("flat oracle vs image level rel err = " + fmt(rel));

        // Grid convergence lambda/8 -> lambda/16 on a correlated surface with
        // sigma_z <= lambda/2: the same physical surface, coarsened by 2x2
        // block averaging so both grids sample cell-centered heights.
        if (!opts.fast) {
            RoughSurface rough(surface.plane, 0.5 * lambda, 5.0 * lambda, surface.passivity);
            const SurfaceRealization fine = sample_surface(rough, lambda / 16.0, 99);
            const int cu = fine.n_u() / 2, cv = fine.n_v() / 2;
            std::vector<double> coarse_h;
            coarse_h.reserve(static_cast<std::size_t>(cu) * cv);
            for (int iu = 0; iu < cu; ++iu)
                for (int iv = 0; iv < cv; ++iv)
                    coarse_h.push_back(0.25 * (fine.height(2 * iu, 2 * iv) + fine.height(2 * iu + 1, 2 * iv) +
                                               fine.height(2 * iu, 2 * iv + 1) +
                                               fine.height(2 * iu + 1, 2 * iv + 1)));
            const SurfaceRealization coarse(rough, cu, cv, 2.0 * fine.step_u(), 2.0 * fine.step_v(),
                                            std::move(coarse_h), 99, {});
            const double a_fine = std::abs(hf_coefficient(tx, rx, fine, k));
            const double a_coarse = std::abs(hf_coefficient(tx, rx, coarse, k));
            const double rel_grid = std::abs(a_fine - a_coarse) / a_fine;
            c.require(rel_grid <= 0.01, "grid convergence lambda/8 vs lambda/16: " + fmt(rel_grid));
            c.note("grid convergence rel change = " + fmt(rel_grid));
        }
    }

    // Very-rough asymptote: oracle mean |normalized coefficient| at large
    // kappa*sigma_z against the energy-conservation scattered floor, +-25%.
    // The scattered power of an i.i.d.-per-cell field scales with the cell
    // area, so at lambda/8 the discrete oracle sits far above that floor; the
    // check is kept and reported honestly (see README, Known limitations).
    {
        const double step = (opts.fast ? 0.25 : 0.125) * lambda;
        RoughSurface rough(surface.plane, 3.0 / k, 0.0, surface.passivity);
        RoughSurface flat(surface.plane, 0.0, 0.0, surface.passivity);
        const std::complex<double> flat_value = hf_coefficient(tx, rx, sample_surface(flat, step, 0), k);
        const EnsembleSummary s = run_ensemble(
            [&](const SurfaceRealization& real) { return hf_coefficient(tx, rx, real, k) / flat_value; }, rough,
            step, opts.fast ? 50 : 100, 20240901);
        const ReflectorModel model = make_reflector_model(ArrayGeometry({tx}), ArrayGeometry({rx}), surface, k);
        const double floor = std::sqrt(model.c_tilde_inf_sq) / std::abs(model.c_bar_flat);
        const double rel = std::abs(s.mean_abs - floor) / floor;
        c.require(rel <= 0.25, "very-rough asymptote: oracle mean|c|/flat = " + fmt(s.mean_abs) +
                                   " vs conservation floor " + fmt(floor) + " (rel err " + fmt(rel) + ")");
    }

    return {"C9", "unit/property invariants + attenuation Monte Carlo", c.pass, c.detail};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    using Fn = std::function<CriterionResult(const AcceptanceOptions&)>;
    const std::vector<Fn> criteria = {criterion_mean_law,  criterion_gaussianity, criterion_correlation,
                                      criterion_power_law, criterion_closed_forms, criterion_tradeoff,
                                      criterion_smr,       criterion_sumrate,      criterion_invariants};
    std::vector<CriterionResult> results;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (opts.only != 0 && opts.only != static_cast<int>(i + 1)) continue;
        try {
            results.push_back(criteria[i](opts));
        } catch (const std::exception& e) {
            results.push_back({"C" + std::to_string(i + 1), "criterion raised an exception", false, e.what()});
        }
    }
    return results;
}

int report_acceptance(const std::vector<CriterionResult>& results) {
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("[%s] %s %s%s%s\n", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.name.c_str(),
                    r.detail.empty() ? "" : " -- ", r.detail.c_str());
        all_pass &= r.pass;
    }
    return all_pass ? 0 : 3;
}

}  // namespace nfchan
