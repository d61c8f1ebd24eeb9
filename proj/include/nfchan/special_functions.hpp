// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>

namespace nfchan {

// Normalized sinc: sin(pi x)/(pi x) with sinc(0) = 1.
double sinc(double x);

// Bessel function of the first kind, order zero. Rational approximations on
// root-bracketing intervals for |x| < 5 and Hankel asymptotics beyond; absolute
// error below 1e-12 for |x| <= 1e4.
double bessel_j0(double x);

// Faddeeva function w(z) = exp(-z^2) erfc(-jz), any z.
std::complex<double> faddeeva_w(std::complex<double> z);

// Error function of a complex argument.
std::complex<double> erf_complex(std::complex<double> z);

// Imaginary error function erfi(z) = -j erf(jz).
std::complex<double> erfi(std::complex<double> z);

// Normalized quadratic-phase integral (1/L) * int_{-L/2}^{L/2} exp(j(a y^2 + b y)) dy.
// Closed form through erf/Faddeeva with the large constant phase cancelled
// analytically, so it stays accurate when b^2/(4a) is huge.
std::complex<double> quad_phase_integral(double a, double b, double L);

// Same integral by adaptive Gauss-Kronrod quadrature; the independent route
// used to validate the closed form. `tol` is the absolute tolerance.
std::complex<double> quad_phase_integral_quadrature(double a, double b, double L, double tol = 1e-10);

}  // namespace nfchan
