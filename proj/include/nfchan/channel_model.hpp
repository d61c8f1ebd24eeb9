// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "nfchan/channel_types.hpp"
#include "nfchan/geometry.hpp"
#include "nfchan/surface.hpp"

namespace nfchan {

// --- Normalized channel structures ------------------------------------------

// Entry (m, n) = exp(j k ||u_rx,m - u_tx,n||); unit modulus.
ChannelMatrix los_matrix(const ArrayGeometry& tx, const ArrayGeometry& rx, double wavenumber);

// Rank-1 point-scatterer structure a_rx(u_s) a_tx(u_s)^T.
ChannelMatrix scatterer_matrix(const ArrayGeometry& tx, const ArrayGeometry& rx, const Point3& scatterer,
                               double wavenumber);

// --- Reflector closed forms --------------------------------------------------

// exp(-g/2) with g = (kappa_z sigma_z)^2.
double roughness_attenuation(double g);

// kappa_z = k (cos theta_tx + cos theta_rx), angles taken from the Tx/Rx
// centers to the surface center.
double kappa_z(const Point3& tx, const Point3& rx, const PlaneSpec& plane, double wavenumber);

// In-plane phase-gradient magnitude kappa_rho = k * A. Two candidate forms for
// A exist (the printed one and the one implied by the derivation); the default
// is the variant selected by the first-harmonic amplitude fit, which is exact.
enum class KappaRhoForm { printed, harmonic_fit };
double kappa_rho(const Point3& tx, const Point3& rx, const PlaneSpec& plane, double wavenumber,
                 KappaRhoForm form = KappaRhoForm::harmonic_fit);

// Numerical first-harmonic amplitude of a_tx cos(phi - phi_tx) + a_rx cos(phi - phi_rx)
// over phi in [0, 2pi); the oracle that picks between the two candidate forms.
double in_plane_gradient_amplitude_fit(const Point3& tx, const Point3& rx, const PlaneSpec& plane);

enum class MirrorSide { rx, tx };

// Deterministic (mean) reflector component via image theory.
struct SpecularComponent {
    std::complex<double> gain;   // c_bar(g) = (zeta/(j lambda)) e^{-g/2} / ||u_vrx - u_tx||
    double field_magnitude;      // zeta e^{-g/2} / ||u_vrx - u_tx||, the level the reflection
                                 // integral itself produces for a flat surface
    double g;                    // (kappa_z sigma_z)^2
    double mirror_distance;      // ||u_vrx - u_tx|| (equals ||u_rx - u_vtx||)
    ChannelMatrix matrix;        // entries e^{j k ||u_vrx,m - u_tx,n||}
};

SpecularComponent deterministic_reflector(const ArrayGeometry& tx, const ArrayGeometry& rx,
                                          const RoughSurface& surface, double wavenumber,
                                          MirrorSide side = MirrorSide::rx);

// --- Spatial correlation ------------------------------------------------------

// Quadrature of the Regime-3 correlation integral over the finite surface:
// (1/|U|) II exp(j k (d_rx sin th_rx(u) + d_tx sin th_tx(u))) dx dy with the
// local elevation angles measured in frames whose z-axes align with the
// element displacements. Emits a warning string when the 2d^2/lambda
// near-field condition is violated.
std::complex<double> spatial_correlation_integral(const Point3& tx_a, const Point3& tx_b, const Point3& rx_a,
                                                  const Point3& rx_b, const PlaneSpec& plane, double wavenumber,
                                                  std::vector<std::string>* warnings = nullptr);

// |R| = sinc((2d/lambda) cos((th2+th1)/2) sin((th2-th1)/2)); returned signed.
double spatial_correlation_sinc(double d, double theta1, double theta2, double wavelength);

// Special cases: displacement parallel / perpendicular to the
// surface-to-receiver direction, with angular spread theta_c.
double correlation_aligned(double d, double theta_c, double wavelength);
double correlation_perpendicular(double d, double theta_c, double wavelength);

// --- Power gains --------------------------------------------------------------

struct ReflectorPowerParams {
    double zeta = 1.0;
    double wavelength = 0.0;
    double u_tx = 0.0;          // Tx center to surface center
    double u_rx = 0.0;
    double mirror_distance = 0.0;
    double area_rx = 0.0;       // effective Rx aperture; lambda^2/(4 pi) for one element
    double area_reflector = 0.0;
    double directivity_tx = 1.0;
    double directivity_reflector = 2.0;
};

struct UncorrelatedPowerGains {
    double c_tilde_inf_sq;   // scattered-power level for very rough surfaces
    double stochastic_power; // E{|c_tilde(g)|^2} = (1 - e^{-g/2})^2 c_tilde_inf_sq
    double total_power;      // |c_bar(0)|^2 e^{-g} + stochastic_power
};

UncorrelatedPowerGains power_gain_uncorrelated(const ReflectorPowerParams& p, double g);

// Piecewise power law in S = (kappa_rho ell)^2 / (2 kappa_z sigma_z)^2:
// |c_bar(0)|^2 above S = 1, |c_bar(0)|^2 S e^{1-S} in between, and the
// scattered floor below S_min (the lower root of S e^{1-S} = floor ratio).
struct CorrelatedPowerLaw {
    double c_bar0_sq;
    double c_tilde_inf_sq;
    double s_min;

    double evaluate_s(double s) const;
    double s_value(double kappa_rho, double kappa_z, double sigma_z, double corr_len) const;
};

CorrelatedPowerLaw make_correlated_power_law(double c_bar0_sq, double c_tilde_inf_sq);

double power_gain_correlated(const ReflectorPowerParams& p, double kappa_rho_val, double kappa_z_val,
                             double sigma_z, double corr_len);

// --- Sampling ------------------------------------------------------------------

struct ReflectorModel {
    RoughSurface surface;
    double g = 0.0;
    double kappa_z = 0.0;
    double kappa_rho = 0.0;
    double s_param = 0.0;
    std::complex<double> c_bar_flat;  // c_bar(0), paper convention
    double c_tilde_inf_sq = 0.0;
    ArrayGeometry virtual_tx;
    ArrayGeometry virtual_rx;
};

ReflectorModel make_reflector_model(const ArrayGeometry& tx, const ArrayGeometry& rx, const RoughSurface& surface,
                                    double wavenumber, double area_rx_override = 0.0);

// Draw c_bar H_bar + c_tilde H_tilde: deterministic mean plus CN(0,1) entries
// scaled by sqrt(E{|c_tilde|^2}). With `correlated_entries` the stochastic
// entries are colored by the local-angle correlation kernel (small arrays only).
ChannelMatrix sample_reflector_channel(const ReflectorModel& model, const ArrayGeometry& tx, const ArrayGeometry& rx,
                                       double wavenumber, std::uint64_t seed, bool correlated_entries = false);

}  // namespace nfchan
