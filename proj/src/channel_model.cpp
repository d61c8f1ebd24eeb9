// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "nfchan/channel_model.hpp"

#include <cmath>
#include <stdexcept>

#include "nfchan/rng.hpp"
#include "nfchan/special_functions.hpp"

namespace nfchan {

namespace {

std::complex<double> unit_phase(double phase) { return {std::cos(phase), std::sin(phase)}; }

// In-plane direction of `p` as seen from the surface center: a = sin of the
// incidence elevation, phi = azimuth in the (axis_u, axis_v) basis.
void in_plane_components(const Point3& p, const PlaneSpec& plane, double& a, double& phi) {
    const Point3 d = p - plane.origin();
    const double cu = d.dot(plane.axis_u());
    const double cv = d.dot(plane.axis_v());
    const double r = d.norm();
    if (!(r > 0.0)) throw std::invalid_argument("in_plane_components: point coincides with the surface center");
    a = std::sqrt(cu * cu + cv * cv) / r;
    phi = std::atan2(cv, cu);
}

}  // namespace

ChannelMatrix los_matrix(const ArrayGeometry& tx, const ArrayGeometry& rx, double wavenumber) {
    ChannelMatrix out;
    out.entries.resize(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
    out.provenance = Provenance::analytic_deterministic;
    for (std::size_t m = 0; m < rx.size(); ++m)
        for (std::size_t n = 0; n < tx.size(); ++n)
            out.entries(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
                unit_phase(wavenumber * (rx.element(m) - tx.element(n)).norm());
    return out;
}

ChannelMatrix scatterer_matrix(const ArrayGeometry& tx, const ArrayGeometry& rx, const Point3& scatterer,
                               double wavenumber) {
    for (const auto& e : tx.elements())
        if ((e - scatterer).norm() == 0.0)
            throw std::invalid_argument("scatterer_matrix: scatterer coincides with a tx element");
    for (const auto& e : rx.elements())
        if ((e - scatterer).norm() == 0.0)
            throw std::invalid_argument("scatterer_matrix: scatterer coincides with an rx element");
    ChannelMatrix out;
    out.provenance = Provenance::analytic_deterministic;
    const Eigen::VectorXcd a_tx = nf_array_response(tx, scatterer, wavenumber);
    const Eigen::VectorXcd a_rx = nf_array_response(rx, scatterer, wavenumber);
    out.entries = a_rx * a_tx.transpose();
    return out;
}

double roughness_attenuation(double g) {
    if (!(g >= 0.0)) throw std::invalid_argument("roughness_attenuation: g must be >= 0");
    return std::exp(-0.5 * g);
}

double kappa_z(const Point3& tx, const Point3& rx, const PlaneSpec& plane, double wavenumber) {
    const double z_tx = plane.signed_distance(tx);
    const double z_rx = plane.signed_distance(rx);
    const double u_tx = (tx - plane.origin()).norm();
    const double u_rx = (rx - plane.origin()).norm();
    return wavenumber * (z_tx / u_tx + z_rx / u_rx);
}

double in_plane_gradient_amplitude_fit(const Point3& tx, const Point3& rx, const PlaneSpec& plane) {
    double a_tx, phi_tx, a_rx, phi_rx;
    in_plane_components(tx, plane, a_tx, phi_tx);
    in_plane_components(rx, plane, a_rx, phi_rx);
    // First-harmonic projection of f(phi) = a_tx cos(phi-phi_tx) + a_rx cos(phi-phi_rx);
    // f is a pure first harmonic, so the projection recovers its amplitude exactly.
    const int n = 4096;
    double c1 = 0.0, s1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * kPi * i / n;
        const double f = a_tx * std::cos(phi - phi_tx) + a_rx * std::cos(phi - phi_rx);
        c1 += f * std::cos(phi);
        s1 += f * std::sin(phi);
    }
    c1 *= 2.0 / n;
    s1 *= 2.0 / n;
    return std::sqrt(c1 * c1 + s1 * s1);
}

double kappa_rho(const Point3& tx, const Point3& rx, const PlaneSpec& plane, double wavenumber, KappaRhoForm form) {
    double a_tx, phi_tx, a_rx, phi_rx;
    in_plane_components(tx, plane, a_tx, phi_tx);
    in_plane_components(rx, plane, a_rx, phi_rx);
    const double phi_c = phi_tx - phi_rx;
    const double base = a_tx + a_rx * std::cos(phi_c);
    double amp;
    if (form == KappaRhoForm::printed) {
        amp = std::sqrt(base * base + a_rx * a_rx);
    } else {
        const double s = a_rx * std::sin(phi_c);
        amp = std::sqrt(base * base + s * s);
    }
    return wavenumber * amp;
}

SpecularComponent deterministic_reflector(const ArrayGeometry& tx, const ArrayGeometry& rx,
                                          const RoughSurface& surface, double wavenumber, MirrorSide side) {
    const PlaneSpec& plane = surface.plane;
    for (const auto& e : tx.elements())
        if (!(plane.signed_distance(e) > 0.0))
            throw std::invalid_argument("deterministic_reflector: tx must lie on the positive side of the plane");
    for (const auto& e : rx.elements())
        if (!(plane.signed_distance(e) > 0.0))
            throw std::invalid_argument("deterministic_reflector: rx must lie on the positive side of the plane");

    const double kz = kappa_z(tx.center(), rx.center(), plane, wavenumber);
    const double g = kz * kz * surface.sigma_z * surface.sigma_z;
    const double lambda = 2.0 * kPi / wavenumber;

    SpecularComponent out;
    out.g = g;
    out.matrix.provenance = Provenance::analytic_deterministic;
    out.matrix.entries.resize(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
    if (side == MirrorSide::rx) {
        const ArrayGeometry vrx = mirror_array(rx, plane);
        out.mirror_distance = (vrx.center() - tx.center()).norm();
        for (std::size_t m = 0; m < rx.size(); ++m)
            for (std::size_t n = 0; n < tx.size(); ++n)
                out.matrix.entries(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
                    unit_phase(wavenumber * (vrx.element(m) - tx.element(n)).norm());
    } else {
        const ArrayGeometry vtx = mirror_array(tx, plane);
        out.mirror_distance = (rx.center() - vtx.center()).norm();
        for (std::size_t m = 0; m < rx.size(); ++m)
            for (std::size_t n = 0; n < tx.size(); ++n)
                out.matrix.entries(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
                    unit_phase(wavenumber * (rx.element(m) - vtx.element(n)).norm());
    }
    const double atten = std::exp(-0.5 * g);
    out.gain = surface.passivity / std::complex<double>(0.0, lambda) * atten / out.mirror_distance;
    out.field_magnitude = surface.passivity * atten / out.mirror_distance;
    return out;
}

std::complex<double> spatial_correlation_integral(const Point3& tx_a, const Point3& tx_b, const Point3& rx_a,
                                                  const Point3& rx_b, const PlaneSpec& plane, double wavenumber,
                                                  std::vector<std::string>* warnings) {
    if (!(plane.area() > 0.0)) throw std::invalid_argument("spatial_correlation_integral: zero-area surface");
    const double lambda = 2.0 * kPi / wavenumber;

    struct LocalFrame {
        Point3 mid;
        Point3 axis;  // unit displacement; zero-length pairs contribute no phase
        double d;
    };
    auto make_frame = [&](const Point3& a, const Point3& b, const char* what) {
        LocalFrame f;
        f.mid = 0.5 * (a + b);
        const Point3 delta = b - a;
        f.d = delta.norm();
        f.axis = f.d > 0.0 ? Point3(delta / f.d) : Point3(0, 0, 1);
        if (warnings && f.d > 0.0) {
            const double dist = (f.mid - plane.origin()).norm();
            if (2.0 * f.d * f.d / lambda >= dist)
                warnings->push_back(std::string(what) +
                                    " pair violates the 2d^2/lambda < distance-to-surface assumption");
        }
        return f;
    };
    const LocalFrame ftx = make_frame(tx_a, tx_b, "tx");
    const LocalFrame frx = make_frame(rx_a, rx_b, "rx");

    // Midpoint rule, refined until two consecutive grids agree.
    auto evaluate = [&](int n) {
        const double du = plane.extent_u() / n;
        const double dv = plane.extent_v() / n;
        std::complex<double> sum(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            const double u = -0.5 * plane.extent_u() + (i + 0.5) * du;
            for (int j = 0; j < n; ++j) {
                const double v = -0.5 * plane.extent_v() + (j + 0.5) * dv;
                const Point3 p = plane.point_at(u, v, 0.0);
                double phase = 0.0;
                if (frx.d > 0.0) {
                    const Point3 r = p - frx.mid;
                    phase += frx.d * (r.dot(frx.axis) / r.norm());
                }
                if (ftx.d > 0.0) {
                    const Point3 r = p - ftx.mid;
                    phase += ftx.d * (r.dot(ftx.axis) / r.norm());
                }
                sum += unit_phase(wavenumber * phase);
            }
        }
        return sum / static_cast<double>(static_cast<long long>(n) * n);
    };

    std::complex<double> prev = evaluate(128);
    for (int n = 256; n <= 1024; n *= 2) {
        const std::complex<double> cur = evaluate(n);
        if (std::abs(cur - prev) < 1e-4) return cur;
        prev = cur;
    }
    return prev;
}

double spatial_correlation_sinc(double d, double theta1, double theta2, double wavelength) {
    if (!(theta1 < theta2)) throw std::invalid_argument("spatial_correlation_sinc: requires theta1 < theta2");
    const double arg =
        2.0 * d / wavelength * std::cos(0.5 * (theta2 + theta1)) * std::sin(0.5 * (theta2 - theta1));
    return sinc(arg);
}

double correlation_aligned(double d, double theta_c, double wavelength) {
    const double s = std::sin(0.5 * theta_c);
    return sinc(2.0 * d / wavelength * s * s);
}

double correlation_perpendicular(double d, double theta_c, double wavelength) {
    return sinc(2.0 * d / wavelength * std::sin(0.5 * theta_c));
}

UncorrelatedPowerGains power_gain_uncorrelated(const ReflectorPowerParams& p, double g) {
    if (!(p.u_tx > 0.0) || !(p.u_rx > 0.0) || !(p.area_rx > 0.0) || !(p.area_reflector > 0.0) ||
        !(p.mirror_distance > 0.0) || !(p.wavelength > 0.0))
        throw std::invalid_argument("power_gain_uncorrelated: geometry quantities must be positive");
    if (!(g >= 0.0)) throw std::invalid_argument("power_gain_uncorrelated: g must be >= 0");
    UncorrelatedPowerGains out;
    out.c_tilde_inf_sq = (p.zeta / p.wavelength) *
                         (p.area_rx * p.directivity_reflector / (4.0 * kPi * p.u_rx * p.u_rx)) *
                         (p.area_reflector * p.directivity_tx / (4.0 * kPi * p.u_tx * p.u_tx));
    const double fade = 1.0 - std::exp(-0.5 * g);
    out.stochastic_power = fade * fade * out.c_tilde_inf_sq;
    const double c_bar0 = p.zeta / (p.wavelength * p.mirror_distance);
    out.total_power = c_bar0 * c_bar0 * std::exp(-g) + out.stochastic_power;
    return out;
}

CorrelatedPowerLaw make_correlated_power_law(double c_bar0_sq, double c_tilde_inf_sq) {
    if (!(c_bar0_sq > 0.0)) throw std::invalid_argument("correlated power law: |c_bar(0)|^2 must be positive");
    const double ratio = c_tilde_inf_sq / c_bar0_sq;
    if (!(ratio > 0.0) || ratio >= 1.0)
        throw std::runtime_error("correlated power law: scattered floor must be below the specular level");

    // Lower root of S e^{1-S} = ratio on (0, 1): bisection to 1e-10, then
    // Newton polish so branch continuity at S_min holds to machine precision.
    auto f = [&](double s) { return s * std::exp(1.0 - s) - ratio; };
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double df = std::exp(1.0 - s) * (1.0 - s);
        if (df == 0.0) break;
        s -= f(s) / df;
    }
    return CorrelatedPowerLaw{c_bar0_sq, c_tilde_inf_sq, s};
}

double CorrelatedPowerLaw::evaluate_s(double s) const {
    if (!(s >= 0.0)) throw std::invalid_argument("CorrelatedPowerLaw: S must be >= 0");
    if (s >= 1.0) return c_bar0_sq;
    if (s <= s_min) return c_tilde_inf_sq;
    return c_bar0_sq * s * std::exp(1.0 - s);
}

double CorrelatedPowerLaw::s_value(double kr, double kz, double sigma_z, double corr_len) const {
    const double denom = 2.0 * kz * sigma_z;
    if (!(denom > 0.0)) throw std::invalid_argument("CorrelatedPowerLaw: kappa_z and sigma_z must be positive");
    const double q = kr * corr_len / denom;
    return q * q;
}

double power_gain_correlated(const ReflectorPowerParams& p, double kappa_rho_val, double kappa_z_val,
                             double sigma_z, double corr_len) {
    const UncorrelatedPowerGains u = power_gain_uncorrelated(p, 1.0);
    const double c_bar0 = p.zeta / (p.wavelength * p.mirror_distance);
    const CorrelatedPowerLaw law = make_correlated_power_law(c_bar0 * c_bar0, u.c_tilde_inf_sq);
    return law.evaluate_s(law.s_value(kappa_rho_val, kappa_z_val, sigma_z, corr_len));
}

ReflectorModel make_reflector_model(const ArrayGeometry& tx, const ArrayGeometry& rx, const RoughSurface& surface,
                                    double wavenumber, double area_rx_override) {
    const PlaneSpec& plane = surface.plane;
    const double lambda = 2.0 * kPi / wavenumber;
    const SpecularComponent spec = deterministic_reflector(tx, rx, surface, wavenumber);

    ReflectorModel model{surface,
                         spec.g,
                         kappa_z(tx.center(), rx.center(), plane, wavenumber),
                         kappa_rho(tx.center(), rx.center(), plane, wavenumber),
                         0.0,
                         surface.passivity / std::complex<double>(0.0, lambda) / spec.mirror_distance,
                         0.0,
                         mirror_array(tx, plane),
                         mirror_array(rx, plane)};

    ReflectorPowerParams p;
    p.zeta = surface.passivity;
    p.wavelength = lambda;
    p.u_tx = (tx.center() - plane.origin()).norm();
    p.u_rx = (rx.center() - plane.origin()).norm();
    p.mirror_distance = spec.mirror_distance;
    p.area_rx = area_rx_override > 0.0 ? area_rx_override : lambda * lambda / (4.0 * kPi);
    p.area_reflector = plane.area();
    model.c_tilde_inf_sq = power_gain_uncorrelated(p, model.g).c_tilde_inf_sq;
    if (surface.sigma_z > 0.0) {
        const double q = model.kappa_rho * surface.corr_len / (2.0 * model.kappa_z * surface.sigma_z);
        model.s_param = q * q;
    }
    return model;
}

ChannelMatrix sample_reflector_channel(const ReflectorModel& model, const ArrayGeometry& tx, const ArrayGeometry& rx,
                                       double wavenumber, std::uint64_t seed, bool correlated_entries) {
    const SpecularComponent spec = deterministic_reflector(tx, rx, model.surface, wavenumber);
    const double fade = 1.0 - std::exp(-0.5 * spec.g);
    const double sigma = fade * std::sqrt(model.c_tilde_inf_sq);
    const Eigen::Index n_rx = spec.matrix.entries.rows();
    const Eigen::Index n_tx = spec.matrix.entries.cols();

    ChannelMatrix out;
    out.provenance = Provenance::analytic_sampled;
    out.entries = spec.gain * spec.matrix.entries;
    if (sigma == 0.0) return out;

    Rng rng(seed);
    Eigen::VectorXcd noise(n_rx * n_tx);
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = rng.complex_normal();

    if (correlated_entries) {
        // Color the entries with the local-angle correlation kernel.
        const Eigen::Index n = noise.size();
        Eigen::MatrixXcd kernel(n, n);
        for (Eigen::Index p = 0; p < n; ++p) {
            const Eigen::Index m1 = p % n_rx, n1 = p / n_rx;
            for (Eigen::Index q = 0; q <= p; ++q) {
                const Eigen::Index m2 = q % n_rx, n2 = q / n_rx;
                const std::complex<double> r = spatial_correlation_integral(
                    tx.element(static_cast<std::size_t>(n1)), tx.element(static_cast<std::size_t>(n2)),
                    rx.element(static_cast<std::size_t>(m1)), rx.element(static_cast<std::size_t>(m2)),
                    model.surface.plane, wavenumber);
                kernel(p, q) = r;
                kernel(q, p) = std::conj(r);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(kernel);
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        noise = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint() * noise;
    }

    for (Eigen::Index m = 0; m < n_rx; ++m)
        for (Eigen::Index n = 0; n < n_tx; ++n) out.entries(m, n) += sigma * noise[n * n_rx + m];
    return out;
}

}  // namespace nfchan
