// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "nfchan/multiuser.hpp"

#include <cmath>
#include <stdexcept>

#include "nfchan/special_functions.hpp"

namespace nfchan {

Beamformer nf_focus_beamformer(const ArrayGeometry& array, const Point3& focus, double wavenumber, BeamKind kind) {
    Beamformer q;
    q.focus = focus;
    q.kind = kind;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(array.size()));
    q.weights.resize(static_cast<Eigen::Index>(array.size()));
    for (std::size_t n = 0; n < array.size(); ++n) {
        const double phase = -wavenumber * (array.element(n) - focus).norm();
        q.weights[static_cast<Eigen::Index>(n)] =
            inv_sqrt_n * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return q;
}

Beamformer restrict_beamformer(const Beamformer& q, Eigen::Index begin, Eigen::Index end) {
    if (begin < 0 || end > q.weights.size() || begin >= end)
        throw std::invalid_argument("restrict_beamformer: invalid element range");
    Beamformer out = q;
    out.weights.setZero();
    out.weights.segment(begin, end - begin) = q.weights.segment(begin, end - begin);
    out.weights /= out.weights.norm();
    return out;
}

std::complex<double> project(const Eigen::VectorXcd& h_row, const Beamformer& q) {
    if (h_row.size() != q.weights.size())
        throw std::invalid_argument("project: channel and beamformer dimensions disagree");
    return (h_row.transpose() * q.weights)(0, 0);
}

double sinr(const Eigen::VectorXcd& h_row, const Beamformer& q_own, const Beamformer& q_other, double power_w,
            double noise_w) {
    if (!(power_w >= 0.0) || !(noise_w > 0.0)) throw std::invalid_argument("sinr: invalid power or noise");
    const double signal = std::norm(project(h_row, q_own)) * power_w;
    const double interference = std::norm(project(h_row, q_other)) * power_w;
    return signal / (interference + noise_w);
}

double NoiseModel::noise_power_w() const {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("NoiseModel: bandwidth must be positive");
    return bandwidth_hz * std::pow(10.0, (n0_dbm_hz + noise_figure_db - 30.0) / 10.0);
}

double sinr_los_closed_form(double a1, double ly, double noise_ratio) {
    if (!(ly > 0.0)) throw std::invalid_argument("sinr_los_closed_form: Ly must be positive");
    const double interference = std::norm(quad_phase_integral(a1, 0.0, ly));
    return 1.0 / (interference + noise_ratio);
}

double sinr_nlos_closed_form(double a2, double b, double ly, double k_bar, double noise_ratio) {
    if (!(ly > 0.0)) throw std::invalid_argument("sinr_nlos_closed_form: Ly must be positive");
    if (!(k_bar > 0.0) || k_bar > 1.0) throw std::invalid_argument("sinr_nlos_closed_form: k_bar must be in (0, 1]");
    const double interference = std::norm(quad_phase_integral(a2, b, ly));
    return 1.0 / (interference + noise_ratio / (k_bar * k_bar));
}

double smr(const Eigen::VectorXcd& h_main_row, const Eigen::VectorXcd& h_side_row, const Beamformer& q) {
    const double main = std::norm(project(h_main_row, q));
    if (!(main > 0.0)) throw std::runtime_error("smr: main-path projection vanishes");
    return std::norm(project(h_side_row, q)) / main;
}

double discrete_two_user_sinr(const ArrayGeometry& array, const Point3& target, const Point3& focus_other,
                              double wavenumber, double noise_ratio) {
    const double n = static_cast<double>(array.size());
    std::complex<double> mismatch(0.0, 0.0);
    for (const auto& e : array.elements()) {
        const double phase = wavenumber * ((e - target).norm() - (e - focus_other).norm());
        mismatch += std::complex<double>(std::cos(phase), std::sin(phase));
    }
    mismatch /= n;
    return 1.0 / (std::norm(mismatch) + noise_ratio);
}

}  // namespace nfchan
