// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "nfchan/channel_model.hpp"
#include "nfchan/rng.hpp"
#include "nfchan/special_functions.hpp"

using namespace nfchan;
using cd = std::complex<double>;

namespace {
const double kFreq = 28e9;
const double kLambda = wavelength_from_frequency(kFreq);
const double kK = wavenumber_from_frequency(kFreq);

PlaneSpec unit_plane(double extent = 2.0) {
    return PlaneSpec(Point3(0, 0, 0), Point3(0, 0, 1), Point3(1, 0, 0), Point3(0, 1, 0), extent, extent);
}
}  // namespace

TEST_CASE("los_matrix basics") {
    const ArrayGeometry tx(std::vector<Point3>{Point3(0, 0, 0)});
    const ArrayGeometry rx(std::vector<Point3>{Point3(0, 0, 2.5)});
    const ChannelMatrix m = los_matrix(tx, rx, kK);
    CHECK(std::abs(m.entries(0, 0) - std::polar(1.0, kK * 2.5)) < 1e-12);

    const ArrayGeometry txa = make_ula({0, 0, 0}, 4, 0.5 * kLambda, {0, 1, 0});
    const ArrayGeometry rxa = make_ula({3, 0, 1}, 3, 0.5 * kLambda, {0, 0, 1});
    const ChannelMatrix big = los_matrix(txa, rxa, kK);
    for (Eigen::Index i = 0; i < big.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < big.entries.cols(); ++j)
            CHECK(std::abs(std::abs(big.entries(i, j)) - 1.0) < 1e-12);

    // Column n equals the Rx response focused on tx element n (stacked form).
    for (Eigen::Index n = 0; n < big.entries.cols(); ++n) {
        const Eigen::VectorXcd col = nf_array_response(rxa, txa.element(static_cast<std::size_t>(n)), kK);
        CHECK((big.entries.col(n) - col).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("scatterer_matrix is the rank-1 outer product of the responses") {
    const ArrayGeometry tx = make_ula({0, 0, 0}, 4, 0.5 * kLambda, {0, 1, 0});
    const ArrayGeometry rx = make_ula({2, 1, 0}, 3, 0.5 * kLambda, {0, 0, 1});
    const Point3 s(1.0, -0.5, 0.3);
    const ChannelMatrix m = scatterer_matrix(tx, rx, s, kK);

    const Eigen::VectorXcd a_tx = nf_array_response(tx, s, kK);
    const Eigen::VectorXcd a_rx = nf_array_response(rx, s, kK);
    CHECK((m.entries - a_rx * a_tx.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.entries);
    CHECK(svd.singularValues()(0) > 1e-6);
    for (Eigen::Index i = 1; i < svd.singularValues().size(); ++i) CHECK(svd.singularValues()(i) < 1e-10);

    // 1x1 case: phase is k (d_ts + d_sr).
    const ArrayGeometry t1(std::vector<Point3>{Point3(0, 0, 0)});
    const ArrayGeometry r1(std::vector<Point3>{Point3(0, 0, 3)});
    const ChannelMatrix m1 = scatterer_matrix(t1, r1, s, kK);
    const double d = (s - t1.element(0)).norm() + (r1.element(0) - s).norm();
    CHECK(std::abs(m1.entries(0, 0) - std::polar(1.0, kK * d)) < 1e-12);

    CHECK_THROWS_AS(scatterer_matrix(t1, r1, t1.element(0), kK), std::invalid_argument);
}

TEST_CASE("roughness_attenuation") {
    CHECK(roughness_attenuation(0.0) == 1.0);
    CHECK(roughness_attenuation(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(roughness_attenuation(1e6) == doctest::Approx(0.0));
    CHECK_THROWS_AS(roughness_attenuation(-0.1), std::invalid_argument);

    // Monte Carlo oracle for the mean of e^{-j z}, z ~ N(0, 1): 1e6 samples.
    Rng rng(12345);
    cd mean(0, 0);
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        mean += cd(std::cos(z), -std::sin(z));
    }
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean - cd(roughness_attenuation(1.0), 0.0)) < 0.002);
}

TEST_CASE("deterministic_reflector") {
    const RoughSurface s(unit_plane(), 0.0, 0.0, 0.8);
    const ArrayGeometry tx = make_ula({0, 0, 5}, 3, 0.5 * kLambda, {1, 0, 0});
    const ArrayGeometry rx = make_ula({0.5, 0, 1}, 2, 0.5 * kLambda, {0, 1, 0});

    const SpecularComponent a = deterministic_reflector(tx, rx, s, kK, MirrorSide::rx);
    const SpecularComponent b = deterministic_reflector(tx, rx, s, kK, MirrorSide::tx);

    // Flat surface: |gain| = zeta / (lambda D), image distance equal both ways.
    CHECK(a.g == 0.0);
    const double expected_gain = 0.8 / (kLambda * a.mirror_distance);
    CHECK(std::abs(std::abs(a.gain) - expected_gain) <= 1e-12 * expected_gain);
    CHECK(std::abs(a.field_magnitude - 0.8 / a.mirror_distance) <= 1e-12);
    CHECK(std::abs(a.mirror_distance - b.mirror_distance) <= 1e-12 * a.mirror_distance);

    // Mirrored-Rx and mirrored-Tx formulations agree entrywise.
    CHECK((a.matrix.entries - b.matrix.entries).cwiseAbs().maxCoeff() < 1e-10);

    // Roughness attenuates the gain by e^{-g/2}.
    const RoughSurface rough(unit_plane(), 0.3 * kLambda, 0.0, 0.8);
    const SpecularComponent c = deterministic_reflector(tx, rx, rough, kK);
    const double expected_rough = std::abs(a.gain) * std::exp(-0.5 * c.g);
    CHECK(std::abs(std::abs(c.gain) - expected_rough) <= 1e-12 * expected_rough);
    CHECK((c.matrix.entries - a.matrix.entries).cwiseAbs().maxCoeff() < 1e-12);

    // Elements behind the plane are rejected.
    const ArrayGeometry behind(std::vector<Point3>{Point3(0, 0, -1)});
    CHECK_THROWS_AS(deterministic_reflector(behind, rx, s, kK), std::invalid_argument);
}

TEST_CASE("spatial correlation closed forms") {
    CHECK(spatial_correlation_sinc(0.0, -0.5, 0.5, kLambda) == 1.0);
    // Full angular spread at half-wavelength separation hits the sinc null.
    CHECK(spatial_correlation_sinc(0.5 * kLambda, -0.5 * kPi, 0.5 * kPi, kLambda) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // Aligned decays slower than perpendicular at theta_c = pi/3.
    const double theta_c = kPi / 3.0;
    for (double d : {0.2, 0.5, 1.0, 1.5}) {
        const double al = std::abs(correlation_aligned(d * kLambda, theta_c, kLambda));
        const double pe = std::abs(correlation_perpendicular(d * kLambda, theta_c, kLambda));
        CHECK(al >= pe);
        // Direct evaluation of both branch formulas.
        const double s = std::sin(0.5 * theta_c);
        CHECK(al == doctest::Approx(std::abs(sinc(2.0 * d * s * s))).epsilon(1e-12));
        CHECK(pe == doctest::Approx(std::abs(sinc(2.0 * d * s))).epsilon(1e-12));
    }
    CHECK_THROWS_AS(spatial_correlation_sinc(0.1, 0.5, 0.5, kLambda), std::invalid_argument);
}

TEST_CASE("spatial_correlation_integral") {
    const PlaneSpec plane = unit_plane(3.0);
    const Point3 tx(0, 0, 90);

    SUBCASE("zero separation gives 1") {
        const cd r = spatial_correlation_integral(tx, tx, {0, 0, 6}, {0, 0, 6}, plane, kK);
        CHECK(std::abs(r - cd(1, 0)) < 1e-9);
    }
    SUBCASE("conjugation under swapping the pair order") {
        const Point3 a(0, -0.25 * kLambda, 6), b(0, 0.25 * kLambda, 6);
        std::vector<std::string> w;
        const cd r1 = spatial_correlation_integral(tx, tx, a, b, plane, kK, &w);
        const cd r2 = spatial_correlation_integral(tx, tx, b, a, plane, kK, &w);
        CHECK(std::abs(r1 - std::conj(r2)) < 1e-6);
    }
    SUBCASE("matches the isotropic sinc form on a matched angular window") {
        // Far receiver: the perpendicular window is sharp, so the quadrature
        // of the local-angle integral approaches the sinc closed form.
        const double R = 6.0;
        const double half = 1.5;
        const double theta_c = 2.0 * std::asin(half / std::hypot(half, R));
        for (double dl : {0.5, 1.0, 2.0, 3.0}) {
            const Point3 a(0, 0, R), b(0, dl * kLambda, R);
            const cd num = spatial_correlation_integral(tx, tx, a, b, plane, kK);
            const double sinc_val = correlation_perpendicular(dl * kLambda, theta_c, kLambda);
            CHECK(std::abs(std::abs(num) - std::abs(sinc_val)) < 0.05);
        }
    }
    SUBCASE("assumption warning for oversized separations") {
        std::vector<std::string> warnings;
        const Point3 a(0, 0, 0.05), b(0, 1.0, 0.05);  // 2d^2/lambda far beyond the distance
        spatial_correlation_integral(tx, tx, a, b, plane, kK, &warnings);
        CHECK(!warnings.empty());
    }
    SUBCASE("zero-area surface is rejected at construction") {
        CHECK_THROWS_AS(PlaneSpec({0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {0, 1, 0}, 0.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("power_gain_uncorrelated limits") {
    ReflectorPowerParams p;
    p.zeta = 1.0;
    p.wavelength = kLambda;
    p.u_tx = 90.0;
    p.u_rx = 2.0;
    p.mirror_distance = 92.0;
    p.area_rx = kLambda * kLambda / (4.0 * kPi);
    p.area_reflector = 9.0;

    const UncorrelatedPowerGains g0 = power_gain_uncorrelated(p, 0.0);
    CHECK(g0.stochastic_power == 0.0);
    const double c_bar0_sq = std::pow(1.0 / (kLambda * 92.0), 2);
    CHECK(std::abs(g0.total_power - c_bar0_sq) <= 1e-12 * c_bar0_sq);

    const UncorrelatedPowerGains ginf = power_gain_uncorrelated(p, 1e9);
    CHECK(std::abs(ginf.total_power - ginf.c_tilde_inf_sq) <= 1e-12 * ginf.c_tilde_inf_sq);
    CHECK(std::abs(ginf.stochastic_power - ginf.c_tilde_inf_sq) <= 1e-12 * ginf.c_tilde_inf_sq);

    // Inverse-square scaling in the Rx distance.
    ReflectorPowerParams p2 = p;
    p2.u_rx = 4.0;
    const double quarter = 0.25 * power_gain_uncorrelated(p, 1.0).c_tilde_inf_sq;
    CHECK(std::abs(power_gain_uncorrelated(p2, 1.0).c_tilde_inf_sq - quarter) <= 1e-12 * quarter);
}

TEST_CASE("kappa_rho") {
    const PlaneSpec plane = unit_plane();
    SUBCASE("normal incidence has no in-plane gradient") {
        CHECK(kappa_rho({0, 0, 5}, {0, 0, 2}, plane, kK) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("selected form matches the numerical first-harmonic fit") {
        const Point3 tx(1.2, -0.4, 4.0), rx(-0.8, 0.9, 2.5);
        const double fit = kK * in_plane_gradient_amplitude_fit(tx, rx, plane);
        CHECK(kappa_rho(tx, rx, plane, kK) == doctest::Approx(fit).epsilon(1e-9));
        // The literal printed form disagrees away from |sin(phi_c)| = 1.
        CHECK(std::abs(kappa_rho(tx, rx, plane, kK, KappaRhoForm::printed) - fit) > 1e-6 * fit);
    }
    SUBCASE("symmetric under tx/rx swap") {
        const Point3 tx(0.7, 0.2, 3.0), rx(-0.5, 0.4, 1.5);
        CHECK(kappa_rho(tx, rx, plane, kK) == doctest::Approx(kappa_rho(rx, tx, plane, kK)).epsilon(1e-12));
    }
}

TEST_CASE("correlated power law") {
    const CorrelatedPowerLaw law = make_correlated_power_law(1.0, 0.1);

    // S_min solves S e^{1-S} = ratio on (0, 1).
    CHECK(law.s_min * std::exp(1.0 - law.s_min) == doctest::Approx(0.1).epsilon(1e-10));
    CHECK(law.s_min < 1.0);

    // Branch continuity at S = 1 and S = S_min.
    CHECK(law.evaluate_s(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(law.evaluate_s(1.0 - 1e-13) == doctest::Approx(law.evaluate_s(1.0 + 1e-13)).epsilon(1e-10));
    CHECK(law.evaluate_s(law.s_min * (1 - 1e-13)) ==
          doctest::Approx(law.evaluate_s(law.s_min * (1 + 1e-13))).epsilon(1e-10));

    // Floor branch below S_min.
    CHECK(law.evaluate_s(0.5 * law.s_min) == 0.1);
    CHECK(law.evaluate_s(2.0) == 1.0);

    // Reflector weaker than the scattered floor is degenerate.
    CHECK_THROWS(make_correlated_power_law(1.0, 1.0));
    CHECK_THROWS(make_correlated_power_law(1.0, 2.0));
}

TEST_CASE("sample_reflector_channel statistics") {
    const RoughSurface rough(unit_plane(), 0.4 * kLambda, 0.0);
    const ArrayGeometry tx = make_ula({0, 0, 6}, 2, 0.5 * kLambda, {1, 0, 0});
    const ArrayGeometry rx = make_ula({0.5, 0, 1.5}, 2, 0.5 * kLambda, {0, 1, 0});
    const ReflectorModel model = make_reflector_model(tx, rx, rough, kK);
    const SpecularComponent spec = deterministic_reflector(tx, rx, rough, kK);

    SUBCASE("smooth surface draws are purely deterministic") {
        const RoughSurface flat(unit_plane(), 0.0, 0.0);
        const ReflectorModel m0 = make_reflector_model(tx, rx, flat, kK);
        const ChannelMatrix h = sample_reflector_channel(m0, tx, rx, kK, 7);
        const SpecularComponent s0 = deterministic_reflector(tx, rx, flat, kK);
        CHECK((h.entries - s0.gain * s0.matrix.entries).cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("sample mean and variance follow the model") {
        const int n = 10000;
        Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(2, 2);
        Eigen::MatrixXd second = Eigen::MatrixXd::Zero(2, 2);
        for (int i = 0; i < n; ++i) {
            const ChannelMatrix h = sample_reflector_channel(model, tx, rx, kK, split_seed(100, i));
            mean += h.entries;
            second += (h.entries - spec.gain * spec.matrix.entries).cwiseAbs2();
        }
        mean /= n;
        second /= n;

        const double fade = 1.0 - std::exp(-0.5 * spec.g);
        const double var = fade * fade * model.c_tilde_inf_sq;
        const double se = std::sqrt(var / n);
        const Eigen::MatrixXcd expected_mean = spec.gain * spec.matrix.entries;
        CHECK((mean - expected_mean).cwiseAbs().maxCoeff() < 3.5 * se);
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < 2; ++j) CHECK(std::abs(second(i, j) - var) <= 0.05 * var);
    }

    SUBCASE("same seed reproduces the draw") {
        const ChannelMatrix a = sample_reflector_channel(model, tx, rx, kK, 77);
        const ChannelMatrix b = sample_reflector_channel(model, tx, rx, kK, 77);
        CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() == 0.0);
        CHECK(a.provenance == Provenance::analytic_sampled);
    }

    SUBCASE("correlated-entry mode keeps the per-entry variance") {
        const int n = 4000;
        Eigen::MatrixXd second = Eigen::MatrixXd::Zero(2, 2);
        for (int i = 0; i < n; ++i) {
            const ChannelMatrix h = sample_reflector_channel(model, tx, rx, kK, split_seed(5, i), true);
            second += (h.entries - spec.gain * spec.matrix.entries).cwiseAbs2();
        }
        second /= n;
        const double fade = 1.0 - std::exp(-0.5 * spec.g);
        const double var = fade * fade * model.c_tilde_inf_sq;
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < 2; ++j) CHECK(std::abs(second(i, j) - var) <= 0.15 * var);
    }
}

TEST_CASE("normalized structures are independent of the passivity factor") {
    const ArrayGeometry tx = make_ula({0, 0, 6}, 2, 0.5 * kLambda, {1, 0, 0});
    const ArrayGeometry rx = make_ula({0.5, 0, 1.5}, 2, 0.5 * kLambda, {0, 1, 0});
    const RoughSurface a(unit_plane(), 0.2 * kLambda, 0.0, 1.0);
    const RoughSurface b(unit_plane(), 0.2 * kLambda, 0.0, 0.5);
    const SpecularComponent sa = deterministic_reflector(tx, rx, a, kK);
    const SpecularComponent sb = deterministic_reflector(tx, rx, b, kK);
    CHECK((sa.matrix.entries - sb.matrix.entries).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(std::abs(sb.gain) - 0.5 * std::abs(sa.gain)) <= 1e-12 * std::abs(sa.gain));

    const ReflectorModel ma = make_reflector_model(tx, rx, a, kK);
    const ReflectorModel mb = make_reflector_model(tx, rx, b, kK);
    // Powers scale linearly in zeta (the power budget carries zeta once).
    CHECK(std::abs(mb.c_tilde_inf_sq - 0.5 * ma.c_tilde_inf_sq) <= 1e-12 * ma.c_tilde_inf_sq);
}
