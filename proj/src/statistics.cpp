// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "nfchan/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nfchan/parallel.hpp"
#include "nfchan/rng.hpp"

namespace nfchan {

namespace {

void component_moments(const std::vector<std::complex<double>>& samples, bool imag, double& skew, double& kurt) {
    const std::size_t n = samples.size();
    double mean = 0.0;
    for (const auto& s : samples) mean += imag ? s.imag() : s.real();
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const auto& s : samples) {
        const double d = (imag ? s.imag() : s.real()) - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (m2 > 0.0) {
        skew = m3 / std::pow(m2, 1.5);
        kurt = m4 / (m2 * m2) - 3.0;
    } else {
        skew = std::nan("");
        kurt = std::nan("");
    }
}

}  // namespace

EnsembleSummary summarize(const std::vector<std::complex<double>>& samples, int hist_bins) {
    if (samples.size() < 2) throw std::invalid_argument("summarize: at least 2 samples required");
    EnsembleSummary s;
    s.n_samples = samples.size();
    for (const auto& x : samples) {
        s.mean += x;
        s.mean_abs += std::abs(x);
    }
    s.mean /= static_cast<double>(s.n_samples);
    s.mean_abs /= static_cast<double>(s.n_samples);
    double var = 0.0;
    for (const auto& x : samples) var += std::norm(x - s.mean);
    s.variance = var / static_cast<double>(s.n_samples - 1);

    component_moments(samples, false, s.skew_re, s.kurt_re);
    component_moments(samples, true, s.skew_im, s.kurt_im);

    double lo = samples[0].real(), hi = samples[0].real();
    for (const auto& x : samples) {
        lo = std::min({lo, x.real(), x.imag()});
        hi = std::max({hi, x.real(), x.imag()});
    }
    if (hi <= lo) hi = lo + 1.0;
    s.hist_edges.resize(static_cast<std::size_t>(hist_bins) + 1);
    for (int i = 0; i <= hist_bins; ++i)
        s.hist_edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / hist_bins;
    s.hist_re.assign(static_cast<std::size_t>(hist_bins), 0);
    s.hist_im.assign(static_cast<std::size_t>(hist_bins), 0);
    auto bin_of = [&](double v) {
        int b = static_cast<int>((v - lo) / (hi - lo) * hist_bins);
        return std::clamp(b, 0, hist_bins - 1);
    };
    for (const auto& x : samples) {
        ++s.hist_re[static_cast<std::size_t>(bin_of(x.real()))];
        ++s.hist_im[static_cast<std::size_t>(bin_of(x.imag()))];
    }
    return s;
}

std::string EnsembleSummary::to_json() const {
    std::string out = "{";
    char buf[64];
    auto add = [&](const char* key, double v, bool comma = true) {
        std::snprintf(buf, sizeof(buf), "\"%s\":%.17g%s", key, v, comma ? "," : "");
        out += buf;
    };
    std::snprintf(buf, sizeof(buf), "\"n\":%zu,", n_samples);
    out += buf;
    add("mean_re", mean.real());
    add("mean_im", mean.imag());
    add("var", variance);
    add("mean_abs", mean_abs);
    add("skew_re", skew_re);
    add("skew_im", skew_im);
    add("kurt_re", kurt_re);
    add("kurt_im", kurt_im);
    out += "\"hist_edges\":[";
    for (std::size_t i = 0; i < hist_edges.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g%s", hist_edges[i], i + 1 < hist_edges.size() ? "," : "");
        out += buf;
    }
    out += "],\"hist_re\":[";
    for (std::size_t i = 0; i < hist_re.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu%s", hist_re[i], i + 1 < hist_re.size() ? "," : "");
        out += buf;
    }
    out += "],\"hist_im\":[";
    for (std::size_t i = 0; i < hist_im.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu%s", hist_im[i], i + 1 < hist_im.size() ? "," : "");
        out += buf;
    }
    out += "]}";
    return out;
}

std::vector<std::complex<double>> run_ensemble_samples(const CoefficientEvaluator& evaluator,
                                                       const RoughSurface& surface, double grid_step, std::size_t n,
                                                       std::uint64_t base_seed) {
    if (n < 2) throw std::invalid_argument("run_ensemble: n must be >= 2");
    std::vector<std::complex<double>> samples(n);
    parallel_for(n, [&](std::size_t k) {
        const SurfaceRealization real = sample_surface(surface, grid_step, split_seed(base_seed, k));
        samples[k] = evaluator(real);
    });
    return samples;
}

EnsembleSummary run_ensemble(const CoefficientEvaluator& evaluator, const RoughSurface& surface, double grid_step,
                             std::size_t n, std::uint64_t base_seed) {
    return summarize(run_ensemble_samples(evaluator, surface, grid_step, n, base_seed));
}

NormalityReport normality_check(const EnsembleSummary& summary) {
    if (summary.n_samples < 100) throw std::invalid_argument("normality_check: needs at least 100 samples");
    NormalityReport r;
    r.skew_re = summary.skew_re;
    r.skew_im = summary.skew_im;
    r.kurt_re = summary.kurt_re;
    r.kurt_im = summary.kurt_im;
    if (std::isnan(summary.skew_re) || std::isnan(summary.skew_im)) {
        r.degenerate = true;
        r.pass = false;
        return r;
    }
    r.pass = std::abs(r.skew_re) < r.skew_threshold && std::abs(r.skew_im) < r.skew_threshold &&
             std::abs(r.kurt_re) < r.kurt_threshold && std::abs(r.kurt_im) < r.kurt_threshold;
    return r;
}

std::complex<double> normalized_correlation(const std::vector<std::complex<double>>& a,
                                            const std::vector<std::complex<double>>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("normalized_correlation: streams must have equal size >= 2");
    const double n = static_cast<double>(a.size());
    std::complex<double> ma(0, 0), mb(0, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    std::complex<double> cov(0, 0);
    double va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto da = a[i] - ma;
        const auto db = b[i] - mb;
        cov += da * std::conj(db);
        va += std::norm(da);
        vb += std::norm(db);
    }
    if (!(va > 0.0) || !(vb > 0.0)) throw std::runtime_error("normalized_correlation: zero-variance stream");
    return cov / std::sqrt(va * vb);
}

std::vector<std::complex<double>> pairwise_correlation(const MultiEvaluator& evaluator, const RoughSurface& surface,
                                                       double grid_step, std::size_t n, std::uint64_t base_seed) {
    if (n < 2) throw std::invalid_argument("pairwise_correlation: n must be >= 2");
    std::vector<std::vector<std::complex<double>>> rows(n);
    parallel_for(n, [&](std::size_t k) {
        const SurfaceRealization real = sample_surface(surface, grid_step, split_seed(base_seed, k));
        rows[k] = evaluator(real);
    });
    const std::size_t width = rows[0].size();
    if (width < 2) throw std::invalid_argument("pairwise_correlation: evaluator must produce >= 2 positions");
    std::vector<std::complex<double>> ref(n);
    for (std::size_t k = 0; k < n; ++k) ref[k] = rows[k][0];
    std::vector<std::complex<double>> out(width - 1);
    std::vector<std::complex<double>> other(n);
    for (std::size_t j = 1; j < width; ++j) {
        for (std::size_t k = 0; k < n; ++k) other[k] = rows[k][j];
        out[j - 1] = normalized_correlation(ref, other);
    }
    return out;
}

}  // namespace nfchan
