// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "nfchan/surface.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "nfchan/rng.hpp"

namespace nfchan {

namespace {

// FFTW plan creation is not thread-safe; executions on distinct buffers are.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct SpectrumKey {
    int n_u, n_v;
    double step_u, step_v, corr_len;
    bool operator<(const SpectrumKey& o) const {
        return std::tie(n_u, n_v, step_u, step_v, corr_len) <
               std::tie(o.n_u, o.n_v, o.step_u, o.step_v, o.corr_len);
    }
};

// sqrt of the circulant eigenvalues of the torus-wrapped Gaussian covariance
// for a unit-variance field. Shared across realizations with the same grid.
const std::vector<double>& spectrum_sqrt(int n_u, int n_v, double step_u, double step_v, double corr_len) {
    static std::map<SpectrumKey, std::unique_ptr<std::vector<double>>> cache;
    static std::mutex cache_mutex;

    const SpectrumKey key{n_u, n_v, step_u, step_v, corr_len};
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    const std::size_t n = static_cast<std::size_t>(n_u) * n_v;
    fftw_complex* buf;
    {
        std::lock_guard<std::mutex> fl(fftw_mutex());
        buf = fftw_alloc_complex(n);
    }
    const double inv_l2 = 1.0 / (corr_len * corr_len);
    for (int iu = 0; iu < n_u; ++iu) {
        const double du = std::min(iu, n_u - iu) * step_u;
        for (int iv = 0; iv < n_v; ++iv) {
            const double dv = std::min(iv, n_v - iv) * step_v;
            buf[static_cast<std::size_t>(iu) * n_v + iv][0] = std::exp(-(du * du + dv * dv) * inv_l2);
            buf[static_cast<std::size_t>(iu) * n_v + iv][1] = 0.0;
        }
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> fl(fftw_mutex());
        plan = fftw_plan_dft_2d(n_u, n_v, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);

    auto out = std::make_unique<std::vector<double>>(n);
    for (std::size_t i = 0; i < n; ++i) (*out)[i] = std::sqrt(std::max(0.0, buf[i][0]));
    {
        std::lock_guard<std::mutex> fl(fftw_mutex());
        fftw_destroy_plan(plan);
        fftw_free(buf);
    }
    auto& ref = *out;
    cache[key] = std::move(out);
    return ref;
}

}  // namespace

RoughSurface::RoughSurface(const PlaneSpec& p, double sigma, double ell, double zeta, double loss)
    : plane(p), sigma_z(sigma), corr_len(ell), passivity(zeta), loss_factor(loss) {
    if (!(sigma_z >= 0.0)) throw std::invalid_argument("RoughSurface: sigma_z must be >= 0");
    if (!(corr_len >= 0.0)) throw std::invalid_argument("RoughSurface: corr_len must be >= 0");
    if (!(passivity > 0.0) || passivity > 1.0) throw std::invalid_argument("RoughSurface: passivity must be in (0, 1]");
    if (!(loss_factor > 0.0)) throw std::invalid_argument("RoughSurface: loss_factor must be positive");
}

SurfaceRealization::SurfaceRealization(RoughSurface surface, int n_u, int n_v, double step_u, double step_v,
                                       std::vector<double> heights, std::uint64_t seed,
                                       std::vector<std::string> warnings)
    : surface_(std::move(surface)),
      n_u_(n_u),
      n_v_(n_v),
      step_u_(step_u),
      step_v_(step_v),
      heights_(std::move(heights)),
      seed_(seed),
      warnings_(std::move(warnings)) {
    if (heights_.size() != static_cast<std::size_t>(n_u_) * n_v_)
        throw std::invalid_argument("SurfaceRealization: height buffer does not match grid dimensions");
}

SurfaceRealization sample_surface(const RoughSurface& surface, double grid_step, std::uint64_t seed) {
    const double eu = surface.plane.extent_u();
    const double ev = surface.plane.extent_v();
    if (!(grid_step > 0.0)) throw std::invalid_argument("sample_surface: grid_step must be positive");
    if (grid_step > 0.25 * std::min(eu, ev))
        throw std::invalid_argument("sample_surface: grid_step must not exceed a quarter of the smallest extent");

    const int n_u = static_cast<int>(std::ceil(eu / grid_step));
    const int n_v = static_cast<int>(std::ceil(ev / grid_step));
    const double step_u = eu / n_u;
    const double step_v = ev / n_v;
    const std::size_t n = static_cast<std::size_t>(n_u) * n_v;

    std::vector<std::string> warnings;
    if (surface.corr_len > 0.0 && grid_step > 0.5 * surface.corr_len)
        warnings.push_back("grid_step exceeds corr_len/2; the sampled field under-resolves the surface correlation");

    std::vector<double> heights(n, 0.0);
    if (surface.sigma_z == 0.0)
        return SurfaceRealization(surface, n_u, n_v, step_u, step_v, std::move(heights), seed, std::move(warnings));

    Rng rng(seed);
    if (surface.corr_len == 0.0) {
        for (auto& h : heights) h = surface.sigma_z * rng.normal();
        return SurfaceRealization(surface, n_u, n_v, step_u, step_v, std::move(heights), seed, std::move(warnings));
    }

    const std::vector<double>& amp = spectrum_sqrt(n_u, n_v, step_u, step_v, surface.corr_len);

    fftw_complex* buf;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> fl(fftw_mutex());
        buf = fftw_alloc_complex(n);
        plan = fftw_plan_dft_2d(n_u, n_v, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    const double inv_sqrt2 = 0.70710678118654752440;
    for (std::size_t i = 0; i < n; ++i) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        buf[i][0] = amp[i] * g1 * inv_sqrt2;
        buf[i][1] = amp[i] * g2 * inv_sqrt2;
    }
    fftw_execute(plan);

    // Re and Im of the inverse transform are independent fields; with the
    // unnormalized backward FFT, E{Re(z)^2} = N/2 for the unit covariance
    // ring, so sqrt(2/N) * Re gives one unit-variance realization.
    const double scale = surface.sigma_z * std::sqrt(2.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) heights[i] = scale * buf[i][0];

    {
        std::lock_guard<std::mutex> fl(fftw_mutex());
        fftw_destroy_plan(plan);
        fftw_free(buf);
    }
    return SurfaceRealization(surface, n_u, n_v, step_u, step_v, std::move(heights), seed, std::move(warnings));
}

double empirical_autocorr(const SurfaceRealization& r, double lag) {
    if (lag < 0.0) throw std::invalid_argument("empirical_autocorr: lag must be >= 0");
    const double step = r.step_u();
    if (std::abs(r.step_v() - step) > 1e-12 * step)
        throw std::invalid_argument("empirical_autocorr: grid cells must be square");
    const double cells = lag / step;
    const int k = static_cast<int>(std::lround(cells));
    if (std::abs(cells - k) > 1e-6)
        throw std::invalid_argument("empirical_autocorr: lag must be a multiple of the grid spacing");
    if (lag > 0.5 * std::min(r.surface().plane.extent_u(), r.surface().plane.extent_v()))
        throw std::invalid_argument("empirical_autocorr: lag exceeds half the surface extent");

    const auto& h = r.heights();
    const std::size_t n = h.size();
    double mean = 0.0;
    for (double v : h) mean += v;
    mean /= static_cast<double>(n);

    double var = 0.0;
    for (double v : h) var += (v - mean) * (v - mean);
    if (!(var > 0.0)) throw std::runtime_error("empirical_autocorr: field has zero variance");
    var /= static_cast<double>(n);

    if (k == 0) return 1.0;

    const int n_u = r.n_u();
    const int n_v = r.n_v();
    double cov = 0.0;
    std::size_t count = 0;
    for (int iu = 0; iu + k < n_u; ++iu)
        for (int iv = 0; iv < n_v; ++iv) {
            cov += (r.height(iu, iv) - mean) * (r.height(iu + k, iv) - mean);
            ++count;
        }
    for (int iu = 0; iu < n_u; ++iu)
        for (int iv = 0; iv + k < n_v; ++iv) {
            cov += (r.height(iu, iv) - mean) * (r.height(iu, iv + k) - mean);
            ++count;
        }
    return cov / static_cast<double>(count) / var;
}

void save_realization(const SurfaceRealization& r, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("save_realization: cannot open " + path);
    auto write_u64 = [&](std::uint64_t v) {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
        std::fwrite(b, 1, 8, f);
    };
    auto write_f64 = [&](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        write_u64(bits);
    };
    write_u64(static_cast<std::uint64_t>(r.n_u()));
    write_u64(static_cast<std::uint64_t>(r.n_v()));
    write_f64(r.step_u());
    write_f64(r.step_v());
    write_f64(r.surface().sigma_z);
    write_f64(r.surface().corr_len);
    write_u64(r.seed());
    for (double h : r.heights()) write_f64(h);
    if (std::fclose(f) != 0) throw std::runtime_error("save_realization: write failed for " + path);
}

}  // namespace nfchan
