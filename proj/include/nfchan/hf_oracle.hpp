// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <vector>

#include "nfchan/channel_types.hpp"
#include "nfchan/geometry.hpp"
#include "nfchan/surface.hpp"

namespace nfchan {

// Numerical evaluation of the reflection integral over a sampled surface:
// midpoint rule for
//   (zeta/(j lambda)) * II  [z_tx/||u-u_tx||^2][z_rx/||u_rx-u||^2]
//                          * e^{jk||u-u_tx||} e^{jk||u_rx-u||} dA
// with u including the sampled height. Phases always use exact per-sample
// distances; this path must stay independent of the closed-form
// approximations it validates.
struct HFConfig {
    // Full 1/r^2 amplitudes per sample, vs. the constant center-based
    // amplitude of the closed-form derivation.
    bool exact_amplitude = true;
    // dA = dx dy by default; the exact slope-corrected area element is a
    // diagnostic mode.
    bool exact_area_element = false;
    // Rows per partial sum; results are combined by a pairwise tree in block
    // order, so values are bit-stable for a fixed block size regardless of
    // thread count.
    int block_rows = 32;
};

std::complex<double> hf_coefficient(const Point3& tx, const Point3& rx, const SurfaceRealization& realization,
                                    double wavenumber, const HFConfig& cfg = {});

// Shares the per-sample Tx leg across several Rx positions.
std::vector<std::complex<double>> hf_coefficients(const Point3& tx, const std::vector<Point3>& rx,
                                                  const SurfaceRealization& realization, double wavenumber,
                                                  const HFConfig& cfg = {});

// Entry (m, n) = hf_coefficient(tx element n, rx element m, ...).
ChannelMatrix hf_channel_matrix(const ArrayGeometry& tx, const ArrayGeometry& rx,
                                const SurfaceRealization& realization, double wavenumber,
                                const HFConfig& cfg = {});

namespace detail {
// sin/cos with Cody-Waite pi/2 reduction; |phase| up to ~1e7 rad, absolute
// error ~1e-14. Kept inline so the oracle's inner loop vectorizes.
void fast_cis(double phase, double& c, double& s);
}  // namespace detail

}  // namespace nfchan
