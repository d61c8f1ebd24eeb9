// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "nfchan/channel_model.hpp"
#include "nfchan/multiuser.hpp"
#include "nfchan/special_functions.hpp"

using namespace nfchan;
using cd = std::complex<double>;

namespace {
const double kFreq = 28e9;
const double kLambda = wavelength_from_frequency(kFreq);
const double kK = wavenumber_from_frequency(kFreq);
}  // namespace

TEST_CASE("nf_focus_beamformer") {
    SUBCASE("single element is a unit weight") {
        const ArrayGeometry a(std::vector<Point3>{Point3(0, 0, 0)});
        const Beamformer q = nf_focus_beamformer(a, {1, 2, 3}, kK);
        CHECK(std::abs(std::abs(q.weights[0]) - 1.0) < 1e-12);
        CHECK(q.weights.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("coherent gain sqrt(N) at the focus") {
        const ArrayGeometry a = make_ula({0, 0, 0}, 64, 0.5 * kLambda, {0, 1, 0});
        const Point3 focus(1.5, 0.3, 0);
        const Beamformer q = nf_focus_beamformer(a, focus, kK);
        CHECK(q.weights.norm() == doctest::Approx(1.0).epsilon(1e-12));
        const Eigen::VectorXcd h = nf_array_response(a, focus, kK);
        CHECK(std::abs(project(h, q)) == doctest::Approx(std::sqrt(64.0)).epsilon(1e-12));
    }
    SUBCASE("far focus reduces to a linear phase front") {
        const ArrayGeometry a = make_ula({0, 0, 0}, 16, 0.5 * kLambda, {0, 1, 0});
        const double phi = 1.1;  // from the array axis
        const Point3 focus(2.0e4 * std::sin(phi), 2.0e4 * std::cos(phi), 0);
        const Beamformer q = nf_focus_beamformer(a, focus, kK);
        // Adjacent phase increments approach k d cos(phi).
        const double expected = kK * 0.5 * kLambda * std::cos(phi);
        for (Eigen::Index n = 0; n + 1 < q.weights.size(); ++n) {
            const double inc = std::arg(q.weights[n + 1] / q.weights[n]);
            CHECK(inc == doctest::Approx(expected).epsilon(1e-3));
        }
    }
}

TEST_CASE("sinr basics") {
    const ArrayGeometry a = make_ula({0, 0, 0}, 32, 0.5 * kLambda, {0, 1, 0});
    const Point3 u1(3.0, 1.0, 0), u2(2.0, -1.5, 0);
    const Eigen::VectorXcd h = nf_array_response(a, u1, kK);
    const Beamformer q1 = nf_focus_beamformer(a, u1, kK);
    const Beamformer q2 = nf_focus_beamformer(a, u2, kK);

    SUBCASE("zero interference reduces to the SNR") {
        Beamformer q_null = q2;
        // Orthogonalize against h to force |h^T q|^2 = 0.
        const Eigen::VectorXcd hc = h.conjugate();
        q_null.weights -= hc * (h.transpose() * q_null.weights)(0, 0) / (h.transpose() * hc)(0, 0);
        const double p = 2.0, n0 = 0.5;
        const double expected = std::norm(project(h, q1)) * p / n0;
        CHECK(sinr(h, q1, q_null, p, n0) == doctest::Approx(expected).epsilon(1e-9));
    }
    SUBCASE("identical beams saturate below 1") {
        const double v = sinr(h, q1, q1, 1.0, 0.3);
        const double x = std::norm(project(h, q1));
        CHECK(v == doctest::Approx(x / (x + 0.3)).epsilon(1e-12));
        CHECK(v < 1.0);
    }
    SUBCASE("interference-limited limit") {
        const double v = sinr(h, q1, q2, 1e12, 1e-12);
        CHECK(v == doctest::Approx(std::norm(project(h, q1)) / std::norm(project(h, q2))).epsilon(1e-6));
    }
    SUBCASE("common phase rotation of the weights changes nothing") {
        Beamformer q1r = q1, q2r = q2;
        q1r.weights *= std::polar(1.0, 0.9);
        q2r.weights *= std::polar(1.0, -2.1);
        CHECK(sinr(h, q1r, q2r, 1.0, 0.1) == doctest::Approx(sinr(h, q1, q2, 1.0, 0.1)).epsilon(1e-12));
    }
    SUBCASE("monotone in power, bounded by the interference-limited value") {
        double prev = 0.0;
        const double limit = std::norm(project(h, q1)) / std::norm(project(h, q2));
        for (double p : {1e-3, 1e-1, 1e1, 1e3, 1e5}) {
            const double v = sinr(h, q1, q2, p, 1.0);
            CHECK(v >= prev);
            CHECK(v <= limit * (1 + 1e-12));
            prev = v;
        }
    }
}

TEST_CASE("noise model") {
    NoiseModel n;
    n.bandwidth_hz = 20e6;
    n.n0_dbm_hz = -174.0;
    n.noise_figure_db = 6.0;
    const double expected = 20e6 * std::pow(10.0, (-174.0 + 6.0 - 30.0) / 10.0);
    CHECK(std::abs(n.noise_power_w() - expected) <= 1e-12 * expected);
    NoiseModel bad;
    CHECK_THROWS_AS(bad.noise_power_w(), std::invalid_argument);
}

TEST_CASE("closed-form SINR expressions") {
    SUBCASE("zero-curvature limit") {
        CHECK(sinr_los_closed_form(0.0, 1.0, 0.1) == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
    }
    SUBCASE("monotone non-decreasing along a coarse a1 Ly^2 doubling grid") {
        const double ly = 2.0;
        double prev = 0.0;
        for (double a1 : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
            const double v = sinr_los_closed_form(a1, ly, 0.1);
            CHECK(v >= prev * (1.0 - 1e-9));
            prev = v;
        }
    }
    SUBCASE("no angular separation") {
        CHECK(sinr_nlos_closed_form(0.0, 0.0, 1.0, 0.7, 0.1) ==
              doctest::Approx(1.0 / (1.0 + 0.1 / 0.49)).epsilon(1e-12));
    }
    SUBCASE("sinc null removes the interference entirely") {
        const double ly = 1.0, k_bar = 0.8, nr = 0.05;
        const double b = 2.0 * kPi / ly;  // Ly b / (2 pi) = 1
        CHECK(sinr_nlos_closed_form(0.0, b, ly, k_bar, nr) ==
              doctest::Approx(k_bar * k_bar / nr).epsilon(1e-9));
    }
    SUBCASE("erfi and sinc forms agree within 5% when a2 <= b/20") {
        for (double b : {20.0, 60.0, 150.0}) {
            for (double frac : {0.01, 0.03, 0.05}) {
                const double a2 = frac * b, ly = 1.7, k_bar = 0.6, nr = 0.1;
                const double full = sinr_nlos_closed_form(a2, b, ly, k_bar, nr);
                const double s = sinc(ly * b / (2.0 * kPi));
                const double approx = 1.0 / (s * s + nr / (k_bar * k_bar));
                CHECK(std::abs(full - approx) / approx < 0.05);
            }
        }
    }
    SUBCASE("b = 0, k_bar = 1 reproduces the LOS expression") {
        for (double a : {0.3, 2.0, 9.0}) {
            CHECK(sinr_nlos_closed_form(a, 0.0, 1.5, 1.0, 0.1) ==
                  doctest::Approx(sinr_los_closed_form(a, 1.5, 0.1)).epsilon(1e-12));
        }
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(sinr_los_closed_form(1.0, 0.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(sinr_nlos_closed_form(1.0, 1.0, 1.0, 0.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(sinr_nlos_closed_form(1.0, 1.0, 1.0, 1.2, 0.1), std::invalid_argument);
    }
}

TEST_CASE("smr definition") {
    const ArrayGeometry a = make_ula({0, 0, 0}, 16, 0.5 * kLambda, {0, 1, 0});
    const Point3 u(4.0, 0.5, 0), v(3.0, -2.0, 0);
    const Eigen::VectorXcd h_main = nf_array_response(a, u, kK);
    const Eigen::VectorXcd h_side = 0.4 * nf_array_response(a, v, kK);
    const Beamformer q = nf_focus_beamformer(a, u, kK);
    CHECK(smr(h_main, h_side, q) ==
          doctest::Approx(std::norm(project(h_side, q)) / std::norm(project(h_main, q))).epsilon(1e-12));

    // Single element: no beamforming discrimination, pure magnitude ratio.
    const ArrayGeometry one(std::vector<Point3>{Point3(0, 0, 0)});
    Eigen::VectorXcd h1(1), h2(1);
    h1 << cd(0.5, 0.1);
    h2 << cd(0.1, -0.2);
    const Beamformer q1 = nf_focus_beamformer(one, u, kK);
    CHECK(smr(h1, h2, q1) == doctest::Approx(std::norm(h2[0]) / std::norm(h1[0])).epsilon(1e-12));
}

TEST_CASE("discrete two-user SINR reduces sensibly") {
    const ArrayGeometry a = make_ula({0, 0, 0}, 256, 0.5 * kLambda, {0, 1, 0});
    const Point3 u1(5.0, -5.0, 0);
    SUBCASE("coincident interferer saturates") {
        CHECK(discrete_two_user_sinr(a, u1, u1, kK, 0.1) == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
    }
    SUBCASE("well-separated interferer approaches the noise-limited value") {
        const Point3 u2(-6.0, 2.0, 0);
        const double v = discrete_two_user_sinr(a, u1, u2, kK, 0.1);
        CHECK(v > 0.9 / 0.1);
        CHECK(v <= 1.0 / 0.1);
    }
}

TEST_CASE("restrict_beamformer keeps unit norm on the active half") {
    const ArrayGeometry a = make_ula({0, 0, 0}, 32, 0.5 * kLambda, {0, 1, 0});
    const Beamformer q = nf_focus_beamformer(a, {2, 0, 0}, kK);
    const Beamformer half = restrict_beamformer(q, 0, 16);
    CHECK(half.weights.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index i = 16; i < 32; ++i) CHECK(std::abs(half.weights[i]) == 0.0);
    CHECK_THROWS_AS(restrict_beamformer(q, 8, 8), std::invalid_argument);
}
