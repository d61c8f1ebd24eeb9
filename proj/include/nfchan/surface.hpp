// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nfchan/geometry.hpp"

namespace nfchan {

// Statistical description of a rough reflecting surface. Heights fluctuate
// along the plane normal: Z ~ N(0, sigma_z^2) with isotropic Gaussian
// autocorrelation C(rho) = exp(-rho^2 / corr_len^2); corr_len = 0 means
// uncorrelated at grid resolution.
struct RoughSurface {
    PlaneSpec plane;
    double sigma_z = 0.0;       // roughness std, meters
    double corr_len = 0.0;      // correlation length, meters
    double passivity = 1.0;     // zeta in (0, 1]
    double loss_factor = 1.0;   // specular-direction loss l_bar in (0, 1]

    RoughSurface(const PlaneSpec& p, double sigma, double ell, double zeta = 1.0, double loss = 1.0);
};

// One sampled height field on a centered grid of cell midpoints covering the
// full plane extent. Heights are stored row-major: h[iu * n_v + iv].
class SurfaceRealization {
public:
    SurfaceRealization(RoughSurface surface, int n_u, int n_v, double step_u, double step_v,
                       std::vector<double> heights, std::uint64_t seed, std::vector<std::string> warnings);

    const RoughSurface& surface() const { return surface_; }
    int n_u() const { return n_u_; }
    int n_v() const { return n_v_; }
    double step_u() const { return step_u_; }
    double step_v() const { return step_v_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<double>& heights() const { return heights_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    double height(int iu, int iv) const { return heights_[static_cast<std::size_t>(iu) * n_v_ + iv]; }

    // In-plane coordinate of cell midpoint (iu, iv).
    double coord_u(int iu) const { return -0.5 * surface_.plane.extent_u() + (iu + 0.5) * step_u_; }
    double coord_v(int iv) const { return -0.5 * surface_.plane.extent_v() + (iv + 0.5) * step_v_; }

    Point3 position(int iu, int iv) const {
        return surface_.plane.point_at(coord_u(iu), coord_v(iv), height(iu, iv));
    }

private:
    RoughSurface surface_;
    int n_u_, n_v_;
    double step_u_, step_v_;
    std::vector<double> heights_;
    std::uint64_t seed_;
    std::vector<std::string> warnings_;
};

// Draws one realization of the stationary Gaussian height field. Deterministic
// in (surface, grid_step, seed). corr_len > 0 uses spectral synthesis with the
// exact (torus-wrapped) grid covariance; corr_len = 0 draws i.i.d. cells.
// grid_step coarser than corr_len/2 produces a warning on the realization,
// not an error.
SurfaceRealization sample_surface(const RoughSurface& surface, double grid_step, std::uint64_t seed);

// Unbiased spatial autocorrelation estimate at the given lag (averaged over
// both grid axes), normalized so that lag 0 gives exactly 1.
double empirical_autocorr(const SurfaceRealization& realization, double lag);

// Flat little-endian binary export: u64 n_u, u64 n_v, f64 step_u, f64 step_v,
// f64 sigma_z, f64 corr_len, u64 seed, then row-major f64 heights.
void save_realization(const SurfaceRealization& realization, const std::string& path);

}  // namespace nfchan
