// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "nfchan/scenario.hpp"
#include "nfchan/statistics.hpp"

namespace nfchan {

struct RunOptions {
    bool fast = false;  // halve realizations, double the oracle grid step
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;
};

// --- regimes: three-regimes mean attenuation -------------------------------------

struct RegimesRow {
    double kappa_sigma_z;
    std::complex<double> mean;   // ensemble mean normalized by the flat value
    double mean_abs;
    double theory_exp;           // e^{-g/2}
    double theory_floor;         // scattered amplitude floor / |c_bar(0)|
};

struct RegimesResult {
    std::vector<RegimesRow> rows;
    double kappa_z_over_k;
    std::size_t realizations;
    double grid_step;
};

RegimesResult compute_regimes(const ScenarioConfig& scenario, const RunOptions& opts = {});

// --- pdf: coefficient distribution ------------------------------------------------

struct PdfResult {
    EnsembleSummary summary;  // of normalized coefficients at the configured roughness
    double kappa_sigma_z;
    std::size_t realizations;
};

PdfResult compute_pdf(const ScenarioConfig& scenario, const RunOptions& opts = {});

// --- correlation: aligned/perpendicular spatial correlation ------------------------

struct CorrelationRow {
    double d_over_lambda;
    double numeric_perpendicular;
    double numeric_aligned;
    double sinc_perpendicular;
    double sinc_aligned;
};

struct CorrelationResult {
    std::vector<CorrelationRow> rows;
    double theta_c_perpendicular;
    double theta_c_aligned;
    std::size_t realizations;
};

CorrelationResult compute_correlation(const ScenarioConfig& scenario, const RunOptions& opts = {});

// --- length-correlation: power law in the smoothness parameter ---------------------

struct LengthCorrelationRow {
    double s;
    double corr_len_m;
    double oracle_ratio;  // E{|c|^2}/|c_flat|^2 from the reflection integral
    double theory_ratio;  // piecewise law normalized by |c_bar(0)|^2
};

struct LengthCorrelationResult {
    std::vector<LengthCorrelationRow> rows;
    double s_min;
    std::size_t realizations;
};

LengthCorrelationResult compute_length_correlation(const ScenarioConfig& scenario, const RunOptions& opts = {});

// --- sinr-tradeoff: two-user SINR trade-off ----------------------------------------

struct TradeoffRow {
    double sweep_value;  // inter-user distance d, or BS distance d1
    double sinr_los;
    double sinr_nlos;
    double sinr_los_discrete;
    double sinr_nlos_discrete;
};

struct TradeoffSweep {
    std::string sweep_name;  // "d" or "d1"
    double k_bar;
    std::vector<TradeoffRow> rows;
};

struct TradeoffResult {
    std::vector<TradeoffSweep> sweeps;
    int n_tx;
    double noise_ratio;
    // Sweep subrange where the quadratic phase expansion behind the closed
    // forms is valid; the closed-vs-discrete consistency check runs there.
    double validation_d_max;
    double validation_d1_min;
};

TradeoffResult compute_sinr_tradeoff(const ScenarioConfig& scenario, const RunOptions& opts = {});

// --- smr: side-lobe-to-main-lobe ratio ---------------------------------------------

struct SmrRow {
    double ly_m;
    int n_y;
    double smr_desired_db;
    double smr_interference_db;
};

struct SmrResult {
    std::vector<SmrRow> rows;
};

SmrResult compute_smr(const ScenarioConfig& scenario, const RunOptions& opts = {});

// --- sumrate: sum rate vs transmit power --------------------------------------------

struct SumRateRow {
    double pt_dbm;
    double rate_los;
    double rate_nlos;
};

struct SumRateSweep {
    double k_bar;
    std::vector<SumRateRow> rows;
};

struct SumRateResult {
    std::vector<SumRateSweep> sweeps;
};

SumRateResult compute_sumrate(const ScenarioConfig& scenario, const RunOptions& opts = {});

// --- Orchestration -------------------------------------------------------------------

// Runs one named experiment ({regimes | pdf | correlation | length-correlation |
// sinr-tradeoff | smr | sumrate}), writing CSV tables plus a JSON sidecar with
// the resolved configuration and seeds into out_dir. Returns the process exit
// code: 0 success, 1 validation error, 2 numerical failure.
int run_experiment(const std::string& name, const ScenarioConfig& scenario, const std::string& out_dir,
                   const RunOptions& opts = {});

// Atomic write helper (temp file + rename), exposed for the CLI.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace nfchan
