// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nfchan/surface.hpp"

namespace nfchan {

struct EnsembleSummary {
    std::size_t n_samples = 0;
    std::complex<double> mean{0.0, 0.0};
    double variance = 0.0;        // unbiased E{|x - mean|^2}
    double mean_abs = 0.0;
    double skew_re = 0.0, skew_im = 0.0;
    double kurt_re = 0.0, kurt_im = 0.0;  // excess kurtosis
    std::vector<double> hist_edges;       // shared bin edges for both components
    std::vector<std::size_t> hist_re, hist_im;

    std::string to_json() const;
};

EnsembleSummary summarize(const std::vector<std::complex<double>>& samples, int hist_bins = 32);

// Channel-coefficient evaluator applied to one surface realization.
using CoefficientEvaluator = std::function<std::complex<double>(const SurfaceRealization&)>;

// n independent realizations with split seeds (realization k uses
// split_seed(base_seed, k)); evaluated concurrently, collected in index order.
std::vector<std::complex<double>> run_ensemble_samples(const CoefficientEvaluator& evaluator,
                                                       const RoughSurface& surface, double grid_step, std::size_t n,
                                                       std::uint64_t base_seed);

EnsembleSummary run_ensemble(const CoefficientEvaluator& evaluator, const RoughSurface& surface, double grid_step,
                             std::size_t n, std::uint64_t base_seed);

struct NormalityReport {
    bool pass = false;
    bool degenerate = false;  // zero variance, moments undefined
    double skew_re = 0.0, skew_im = 0.0;
    double kurt_re = 0.0, kurt_im = 0.0;
    double skew_threshold = 0.3;
    double kurt_threshold = 0.5;
};

// Moment-based check: |skewness| < 0.3 and |excess kurtosis| < 0.5 per
// component. Requires at least 100 samples in the summary.
NormalityReport normality_check(const EnsembleSummary& summary);

// Centered correlation of two coefficient streams, normalized by the
// geometric mean of the sample variances (identical streams give exactly 1).
std::complex<double> normalized_correlation(const std::vector<std::complex<double>>& a,
                                            const std::vector<std::complex<double>>& b);

// Evaluator producing one coefficient per Rx position for a shared realization.
using MultiEvaluator = std::function<std::vector<std::complex<double>>(const SurfaceRealization&)>;

// Correlation of position 0 against every other position in the evaluator's
// output, over n realizations with split seeds.
std::vector<std::complex<double>> pairwise_correlation(const MultiEvaluator& evaluator, const RoughSurface& surface,
                                                       double grid_step, std::size_t n, std::uint64_t base_seed);

}  // namespace nfchan
