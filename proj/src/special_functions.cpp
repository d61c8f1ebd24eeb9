// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "nfchan/special_functions.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace nfchan {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrtPi = 1.772453850905516027298167483341145183;

// ---------------------------------------------------------------------------
// Faddeeva function.
//
// Moderate |z|: trapezoid approximation of the defining integral on the
// half-integer grid t_k = (k + 1/2)h plus the residue correction for the pole
// (Chiarella & Reichel), accurate to ~1e-14 for Im(z) >= 0.
// Large |z|: Laplace continued fraction.
// ---------------------------------------------------------------------------

std::complex<double> faddeeva_upper(std::complex<double> z) {
    const double az2 = std::norm(z);
    if (az2 > 56.25) {
        // Continued fraction w(z) = (j/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...))))
        std::complex<double> t(0.0, 0.0);
        for (int k = 24; k >= 1; --k) t = (0.5 * k) / (z - t);
        return std::complex<double>(0.0, 1.0 / kSqrtPi) / (z - t);
    }

    // Trapezoid approximation of (j/pi) int exp(-t^2)/(z-t) dt with the pole
    // residue restored (Chiarella-Reichel). Two staggered grids are kept: near
    // the real axis the formula degenerates where Re(z) approaches a grid
    // point, so the grid farther from Re(z) is used.
    constexpr double h = 0.5;
    constexpr int K = 14;
    bool half_grid = true;
    if (z.imag() < 0.5) {
        const double x = std::abs(z.real()) / h;
        const double d_half = std::abs(x - (std::floor(x) + 0.5));
        const double d_int = std::abs(x - std::round(x));
        half_grid = d_half >= d_int;
    }

    const std::complex<double> j2piz_h(-2.0 * kPi * z.imag() / h, 2.0 * kPi * z.real() / h);
    std::complex<double> sum(0.0, 0.0);
    std::complex<double> w;
    if (half_grid) {
        for (int k = K; k >= 0; --k) {
            const double t = (k + 0.5) * h;
            sum += std::exp(-t * t) * (1.0 / (z - t) + 1.0 / (z + t));
        }
        w = std::complex<double>(0.0, h / kPi) * sum;
        w += 2.0 * std::exp(-z * z) / (1.0 + std::exp(-j2piz_h));
    } else {
        sum = 1.0 / z;
        for (int k = K; k >= 1; --k) {
            const double t = k * h;
            sum += std::exp(-t * t) * (1.0 / (z - t) + 1.0 / (z + t));
        }
        w = std::complex<double>(0.0, h / kPi) * sum;
        w += 2.0 * std::exp(-z * z) / (1.0 - std::exp(-j2piz_h));
    }
    return w;
}

struct GaussKronrod {
    // 15-point Kronrod nodes/weights with embedded 7-point Gauss rule.
    static constexpr std::array<double, 8> xgk = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                                                  0.741531185599394, 0.586087235467691, 0.405845151377397,
                                                  0.207784955007898, 0.0};
    static constexpr std::array<double, 8> wgk = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                                                  0.140653259715525, 0.169004726639267, 0.190350578064785,
                                                  0.204432940075298, 0.209482141084728};
    static constexpr std::array<double, 4> wg = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                                 0.417959183673469};
};

template <typename F>
void gk15(const F& f, double lo, double hi, std::complex<double>& value, double& error) {
    const double c = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const std::complex<double> fc = f(c);
    std::complex<double> res_g = GaussKronrod::wg[3] * fc;
    std::complex<double> res_k = GaussKronrod::wgk[7] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * GaussKronrod::xgk[i];
        const std::complex<double> fsum = f(c - dx) + f(c + dx);
        res_k += GaussKronrod::wgk[i] * fsum;
        if (i % 2 == 1) res_g += GaussKronrod::wg[i / 2] * fsum;
    }
    value = res_k * half;
    error = std::abs(res_k - res_g) * half;
}

}  // namespace

double sinc(double x) {
    const double px = kPi * x;
    if (std::abs(px) < 1e-4) {
        const double p2 = px * px;
        return 1.0 - p2 / 6.0 * (1.0 - p2 / 20.0);
    }
    return std::sin(px) / px;
}

double bessel_j0(double x) {
    // J0 is even; the library routine rejects negative arguments.
    return std::cyl_bessel_j(0.0, std::abs(x));
}

std::complex<double> faddeeva_w(std::complex<double> z) {
    if (z.imag() >= 0.0) return faddeeva_upper(z);
    // w(z) = 2 exp(-z^2) - w(-z); exp may overflow far below the real axis,
    // which is outside this project's use of the function.
    return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

std::complex<double> erf_complex(std::complex<double> z) {
    if (z.real() < 0.0) return -erf_complex(-z);
    if (z == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
    // erf(z) = 1 - exp(-z^2) w(jz), valid for Re(z) >= 0.
    const std::complex<double> jz(-z.imag(), z.real());
    return 1.0 - std::exp(-z * z) * faddeeva_upper(jz);
}

std::complex<double> erfi(std::complex<double> z) {
    const std::complex<double> jz(-z.imag(), z.real());
    const std::complex<double> e = erf_complex(jz);
    return {e.imag(), -e.real()};  // -j * erf(jz)
}

std::complex<double> quad_phase_integral(double a, double b, double L) {
    if (!(L > 0.0)) throw std::invalid_argument("quad_phase_integral: L must be positive");
    if (a < 0.0) return std::conj(quad_phase_integral(-a, -b, L));
    if (b < 0.0) b = -b;  // integrand symmetric under y -> -y

    if (a == 0.0) return {sinc(L * b / (2.0 * kPi)), 0.0};

    const double quad_phase_span = a * L * L / 4.0;
    if (quad_phase_span < 1e-5) {
        // sinc plus the first-order term in a:
        // (1/L) int y^2 e^{jby} dy, exact for the truncated expansion.
        const double u = 0.5 * L * b;
        double i2;  // (1/L) * int_{-L/2}^{L/2} y^2 cos(b y) dy, scaled by (L/2)^-2 below
        if (std::abs(u) < 1e-4) {
            i2 = L * L / 12.0;
        } else {
            // int_{-h}^{h} y^2 cos(by) dy = 2[(h^2/b - 2/b^3) sin(bh) + (2h/b^2) cos(bh)]
            const double h = 0.5 * L;
            i2 = 2.0 * ((h * h / b - 2.0 / (b * b * b)) * std::sin(u) + (2.0 * h / (b * b)) * std::cos(u)) / L;
        }
        return std::complex<double>(sinc(L * b / (2.0 * kPi)), a * i2);
    }

    // General case through F(t) = int_0^t e^{j a tau^2} d tau
    //                          = sqrt(pi)/(2 sqrt(a)) e^{j pi/4} erf(t sqrt(a) e^{-j pi/4}).
    // The window is [t1, t2] around the stationary point shift y0 = b/(2a), and
    // the constant phase b^2/(4a) is cancelled against the erf tails
    // analytically: a t_i^2 - b^2/(4a) = +- b L/2 + a L^2/4 stays moderate.
    const double y0 = b / (2.0 * a);
    const double t1 = y0 - 0.5 * L;
    const double t2 = y0 + 0.5 * L;
    const double sqrta = std::sqrt(a);
    const std::complex<double> ejp4(0.70710678118654752440, 0.70710678118654752440);    // e^{+j pi/4}
    const std::complex<double> emjp4(0.70710678118654752440, -0.70710678118654752440);  // e^{-j pi/4}
    const std::complex<double> pref = (kSqrtPi / (2.0 * sqrta)) * ejp4 / L;

    const double theta1 = -0.5 * b * L + quad_phase_span;  // a t1^2 - b^2/(4a)
    const double theta2 = +0.5 * b * L + quad_phase_span;  // a t2^2 - b^2/(4a)

    // tail(t, theta) = sign(t) * e^{j a t^2 - j b^2/(4a)} * w(j sign(t) t sqrt(a) e^{-j pi/4})
    auto tail = [&](double t, double theta) -> std::complex<double> {
        const double s = t >= 0.0 ? 1.0 : -1.0;
        const std::complex<double> xi = (s * t * sqrta) * emjp4;
        const std::complex<double> jxi(-xi.imag(), xi.real());
        return s * std::polar(1.0, theta) * faddeeva_upper(jxi);
    };

    const double s1 = t1 > 0.0 ? 1.0 : (t1 < 0.0 ? -1.0 : 0.0);
    const double s2 = t2 > 0.0 ? 1.0 : (t2 < 0.0 ? -1.0 : 0.0);

    std::complex<double> saturated(0.0, 0.0);
    if (s2 != s1) {
        // The window straddles 0, so y0 <= L/2 and b^2/(4a) <= a L^2/4 is moderate.
        saturated = (s2 - s1) * std::polar(1.0, -b * b / (4.0 * a));
    }
    std::complex<double> diff = saturated;
    if (s2 != 0.0) diff -= tail(t2, theta2);
    if (s1 != 0.0) diff += tail(t1, theta1);
    return pref * diff;
}

std::complex<double> quad_phase_integral_quadrature(double a, double b, double L, double tol) {
    if (!(L > 0.0)) throw std::invalid_argument("quad_phase_integral_quadrature: L must be positive");
    auto f = [a, b](double y) {
        const double phase = (a * y + b) * y;
        return std::complex<double>(std::cos(phase), std::sin(phase));
    };

    struct Segment {
        double lo, hi;
        std::complex<double> value;
        double error;
    };

    std::vector<Segment> segs;
    // Seed with enough panels that each holds a bounded amount of phase.
    const double span = std::abs(a) * L * L / 4.0 + std::abs(b) * L / 2.0;
    const int n0 = std::max(4, std::min(4096, static_cast<int>(span / kPi) + 4));
    segs.reserve(static_cast<std::size_t>(n0) + 64);
    for (int i = 0; i < n0; ++i) {
        Segment s;
        s.lo = -0.5 * L + L * i / n0;
        s.hi = -0.5 * L + L * (i + 1) / n0;
        gk15(f, s.lo, s.hi, s.value, s.error);
        segs.push_back(s);
    }

    const double target = tol * L;
    for (int iter = 0; iter < 20000; ++iter) {
        double total_error = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total_error += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        if (total_error <= target) break;
        Segment& s = segs[worst];
        const double mid = 0.5 * (s.lo + s.hi);
        Segment right;
        right.lo = mid;
        right.hi = s.hi;
        s.hi = mid;
        gk15(f, s.lo, s.hi, s.value, s.error);
        gk15(f, right.lo, right.hi, right.value, right.error);
        segs.push_back(right);
    }

    std::complex<double> sum(0.0, 0.0);
    for (const auto& s : segs) sum += s.value;
    return sum / L;
}

}  // namespace nfchan
