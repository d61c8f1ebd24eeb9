// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "nfchan/hf_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "nfchan/parallel.hpp"

namespace nfchan {

namespace detail {

namespace {
// fdlibm-style constants: 33-bit split of pi/2 and its tail.
constexpr double kInvPio2 = 6.36619772367581382433e-01;
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Lo = 6.07710050650619224932e-11;

constexpr double S1 = -1.66666666666666324348e-01;
constexpr double S2 = 8.33333333332248946124e-03;
constexpr double S3 = -1.98412698298579493134e-04;
constexpr double S4 = 2.75573137070700676789e-06;
constexpr double S5 = -2.50507602534068634243e-08;
constexpr double S6 = 1.58969099521155010221e-10;

constexpr double C1 = 4.16666666666666019037e-02;
constexpr double C2 = -1.38888888888741095749e-03;
constexpr double C3 = 2.48015872894767294178e-05;
constexpr double C4 = -2.75573143513906633035e-07;
constexpr double C5 = 2.08757232129817482790e-09;
constexpr double C6 = -1.13596475577881948265e-11;
}  // namespace

void fast_cis(double phase, double& c, double& s) {
    const double fn = std::nearbyint(phase * kInvPio2);
    const double r = (phase - fn * kPio2Hi) - fn * kPio2Lo;
    const long long q = static_cast<long long>(fn);

    const double z = r * r;
    const double ps = r + r * z * (S1 + z * (S2 + z * (S3 + z * (S4 + z * (S5 + z * S6)))));
    const double pc = 1.0 - 0.5 * z + z * z * (C1 + z * (C2 + z * (C3 + z * (C4 + z * (C5 + z * C6)))));

    const bool swap = (q & 1) != 0;
    const double s0 = swap ? pc : ps;
    const double c0 = swap ? ps : pc;
    s = (q & 2) ? -s0 : s0;
    c = ((q + 1) & 2) ? -c0 : c0;
}

}  // namespace detail

namespace {

struct SweepContext {
    const SurfaceRealization* real;
    Point3 tx;
    std::vector<Point3> rx;
    double wavenumber;
    HFConfig cfg;
    double z_tx;                  // tx height over the plane
    std::vector<double> z_rx;     // rx heights over the plane
};

// Partial sums (one complex per rx) for rows [row_begin, row_end).
void sweep_rows(const SweepContext& ctx, int row_begin, int row_end, std::complex<double>* acc) {
    const SurfaceRealization& sr = *ctx.real;
    const PlaneSpec& plane = sr.surface().plane;
    const int n_v = sr.n_v();
    const std::size_t n_rx = ctx.rx.size();
    const double k = ctx.wavenumber;
    const bool exact_amp = ctx.cfg.exact_amplitude;
    const bool exact_area = ctx.cfg.exact_area_element;

    const Point3 av = plane.axis_v();
    const Point3 nrm = plane.normal();

    std::vector<double> px(n_v), py(n_v), pz(n_v), r1(n_v), w1(n_v), area(n_v);
    std::vector<double> acc_re(n_rx, 0.0), acc_im(n_rx, 0.0);

    const double cell = sr.step_u() * sr.step_v();

    for (int iu = row_begin; iu < row_end; ++iu) {
        const Point3 base = plane.point_at(sr.coord_u(iu), sr.coord_v(0), 0.0);
        const double* h = sr.heights().data() + static_cast<std::size_t>(iu) * n_v;

        for (int iv = 0; iv < n_v; ++iv) {
            const double z = h[iv];
            px[iv] = base.x() + iv * (sr.step_v() * av.x()) + z * nrm.x();
            py[iv] = base.y() + iv * (sr.step_v() * av.y()) + z * nrm.y();
            pz[iv] = base.z() + iv * (sr.step_v() * av.z()) + z * nrm.z();
        }
        for (int iv = 0; iv < n_v; ++iv) {
            const double dx = px[iv] - ctx.tx.x();
            const double dy = py[iv] - ctx.tx.y();
            const double dz = pz[iv] - ctx.tx.z();
            r1[iv] = std::sqrt(dx * dx + dy * dy + dz * dz);
        }
        if (exact_amp) {
            for (int iv = 0; iv < n_v; ++iv) w1[iv] = ctx.z_tx / (r1[iv] * r1[iv]);
        } else {
            for (int iv = 0; iv < n_v; ++iv) w1[iv] = 1.0;
        }
        if (exact_area) {
            // Central differences in-plane; one-sided at the boundary rows.
            for (int iv = 0; iv < n_v; ++iv) {
                const int um = std::max(iu - 1, 0), up = std::min(iu + 1, sr.n_u() - 1);
                const int vm = std::max(iv - 1, 0), vp = std::min(iv + 1, n_v - 1);
                const double dzdu = (sr.height(up, iv) - sr.height(um, iv)) / ((up - um) * sr.step_u());
                const double dzdv = (sr.height(iu, vp) - sr.height(iu, vm)) / ((vp - vm) * sr.step_v());
                area[iv] = std::sqrt(1.0 + dzdu * dzdu + dzdv * dzdv);
            }
        }

        for (std::size_t ri = 0; ri < n_rx; ++ri) {
            const double rx_x = ctx.rx[ri].x();
            const double rx_y = ctx.rx[ri].y();
            const double rx_z = ctx.rx[ri].z();
            const double z_rx = ctx.z_rx[ri];
            double sum_re = 0.0, sum_im = 0.0;
            for (int iv = 0; iv < n_v; ++iv) {
                const double dx = rx_x - px[iv];
                const double dy = rx_y - py[iv];
                const double dz = rx_z - pz[iv];
                const double r2 = std::sqrt(dx * dx + dy * dy + dz * dz);
                double w = w1[iv];
                if (exact_amp) w *= z_rx / (r2 * r2);
                if (exact_area) w *= area[iv];
                double cph, sph;
                detail::fast_cis(k * (r1[iv] + r2), cph, sph);
                sum_re += w * cph;
                sum_im += w * sph;
            }
            acc[ri] += std::complex<double>(sum_re, sum_im) * cell;
        }
    }
}

}  // namespace

std::vector<std::complex<double>> hf_coefficients(const Point3& tx, const std::vector<Point3>& rx,
                                                  const SurfaceRealization& sr, double wavenumber,
                                                  const HFConfig& cfg) {
    const PlaneSpec& plane = sr.surface().plane;
    const double lambda = 2.0 * kPi / wavenumber;
    if (!(wavenumber > 0.0)) throw std::invalid_argument("hf: wavenumber must be positive");
    if (std::max(sr.step_u(), sr.step_v()) > lambda / 4.0 * (1.0 + 1e-12))
        throw std::invalid_argument("hf: grid step exceeds lambda/4, phases would alias");

    SweepContext ctx;
    ctx.real = &sr;
    ctx.tx = tx;
    ctx.rx = rx;
    ctx.wavenumber = wavenumber;
    ctx.cfg = cfg;
    ctx.z_tx = plane.signed_distance(tx);
    if (!(ctx.z_tx > 0.0)) throw std::invalid_argument("hf: tx must lie strictly on the positive side of the surface");
    ctx.z_rx.reserve(rx.size());
    for (const auto& p : rx) {
        const double z = plane.signed_distance(p);
        if (!(z > 0.0)) throw std::invalid_argument("hf: rx must lie strictly on the positive side of the surface");
        ctx.z_rx.push_back(z);
    }

    const int block_rows = std::max(1, cfg.block_rows);
    const int n_blocks = (sr.n_u() + block_rows - 1) / block_rows;
    const std::size_t n_rx = rx.size();

    std::vector<std::vector<std::complex<double>>> partial(static_cast<std::size_t>(n_blocks),
                                                           std::vector<std::complex<double>>(n_rx, {0.0, 0.0}));
    parallel_for(static_cast<std::size_t>(n_blocks), [&](std::size_t b) {
        const int row_begin = static_cast<int>(b) * block_rows;
        const int row_end = std::min(row_begin + block_rows, sr.n_u());
        sweep_rows(ctx, row_begin, row_end, partial[b].data());
    });

    // Prefactor zeta/(j lambda); the constant-amplitude mode folds in the
    // center-based amplitudes of c_I.
    std::complex<double> pref = sr.surface().passivity / std::complex<double>(0.0, lambda);
    if (!cfg.exact_amplitude) {
        const double u_tx = (tx - plane.origin()).norm();
        pref *= ctx.z_tx / (u_tx * u_tx);
    }

    std::vector<std::complex<double>> out(n_rx);
    for (std::size_t ri = 0; ri < n_rx; ++ri) {
        std::vector<std::complex<double>> slots(static_cast<std::size_t>(n_blocks));
        for (int b = 0; b < n_blocks; ++b) slots[static_cast<std::size_t>(b)] = partial[static_cast<std::size_t>(b)][ri];
        std::complex<double> total = tree_reduce(std::move(slots));
        std::complex<double> p = pref;
        if (!cfg.exact_amplitude) {
            const double u_rx = (rx[ri] - plane.origin()).norm();
            p *= ctx.z_rx[ri] / (u_rx * u_rx);
        }
        out[ri] = p * total;
    }
    return out;
}

std::complex<double> hf_coefficient(const Point3& tx, const Point3& rx, const SurfaceRealization& sr,
                                    double wavenumber, const HFConfig& cfg) {
    return hf_coefficients(tx, {rx}, sr, wavenumber, cfg)[0];
}

ChannelMatrix hf_channel_matrix(const ArrayGeometry& tx, const ArrayGeometry& rx, const SurfaceRealization& sr,
                                double wavenumber, const HFConfig& cfg) {
    ChannelMatrix out;
    out.entries.resize(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
    out.provenance = Provenance::oracle;
    for (std::size_t n = 0; n < tx.size(); ++n) {
        const auto col = hf_coefficients(tx.element(n), rx.elements(), sr, wavenumber, cfg);
        for (std::size_t m = 0; m < rx.size(); ++m)
            out.entries(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = col[m];
    }
    return out;
}

}  // namespace nfchan
