// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nfchan/geometry.hpp"

namespace nfchan {

enum class BeamKind { los_focus, nlos_focus };

// Phase-only beamformer w_n = exp(-j k ||u_n - focus||)/sqrt(N).
struct Beamformer {
    Eigen::VectorXcd weights;
    Point3 focus;
    BeamKind kind = BeamKind::los_focus;
};

Beamformer nf_focus_beamformer(const ArrayGeometry& array, const Point3& focus, double wavenumber,
                               BeamKind kind = BeamKind::los_focus);

// Zeroes the weights outside [begin, end) and renormalizes; the
// partitioned-array serving mode where each sub-array carries one stream.
Beamformer restrict_beamformer(const Beamformer& q, Eigen::Index begin, Eigen::Index end);

// Row-channel/beamformer projection h^T q (the channel row h has entries
// H_{1,n}; a focus beamformer with matching phases is coherent).
std::complex<double> project(const Eigen::VectorXcd& h_row, const Beamformer& q);

// SINR = |h^T q_own|^2 P / (|h^T q_other|^2 P + sigma_n^2).
double sinr(const Eigen::VectorXcd& h_row, const Beamformer& q_own, const Beamformer& q_other, double power_w,
            double noise_w);

// Noise power sigma_n^2 = W * 10^((N0_dbm_hz + Nf_db - 30)/10) watts.
struct NoiseModel {
    double bandwidth_hz = 0.0;
    double n0_dbm_hz = -174.0;
    double noise_figure_db = 0.0;

    double noise_power_w() const;
};

// Closed-form two-user SINRs for the continuum aperture of length Ly.
// LOS serving: interference carries only the quadratic phase mismatch a1.
double sinr_los_closed_form(double a1, double ly, double noise_ratio);
// NLOS serving: linear angular mismatch b plus quadratic a2; noise penalized
// by the specular Rician factor k_bar.
double sinr_nlos_closed_form(double a2, double b, double ly, double k_bar, double noise_ratio);

// Side-lobe-to-main-lobe power ratio |h_side^T q|^2 / |h_main^T q|^2.
double smr(const Eigen::VectorXcd& h_main_row, const Eigen::VectorXcd& h_side_row, const Beamformer& q);

// Discrete two-user SINR on an explicit array: the own beam is focused at the
// target (coherent numerator 1), the interfering beam at focus_other.
// `noise_ratio` is the effective sigma_n^2/(P |gain|^2) of the served path.
double discrete_two_user_sinr(const ArrayGeometry& array, const Point3& target, const Point3& focus_other,
                              double wavenumber, double noise_ratio);

}  // namespace nfchan
