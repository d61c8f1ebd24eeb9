// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "nfchan/channel_model.hpp"
#include "nfchan/hf_oracle.hpp"

using namespace nfchan;

namespace {

// Compact far-ish geometry so unit tests stay fast: 0.6 x 0.6 m surface at
// 28 GHz is ~450x450 samples at lambda/8.
const double kFreq = 28e9;
const double kLambda = wavelength_from_frequency(kFreq);
const double kWavenumber = wavenumber_from_frequency(kFreq);

PlaneSpec small_plane() {
    return PlaneSpec(Point3(0, 0, 0), Point3(0, 0, 1), Point3(1, 0, 0), Point3(0, 1, 0), 0.6, 0.6);
}

}  // namespace

TEST_CASE("flat-surface coefficient matches the image-theory field level") {
    const RoughSurface s(small_plane(), 0.0, 0.0);
    const SurfaceRealization real = sample_surface(s, kLambda / 8.0, 1);
    const Point3 tx(0, 0, 5.0), rx(0, 0, 0.5);
    const auto c = hf_coefficient(tx, rx, real, kWavenumber);
    const SpecularComponent spec = deterministic_reflector(ArrayGeometry({tx}), ArrayGeometry({rx}), s, kWavenumber);
    CHECK(std::abs(std::abs(c) - spec.field_magnitude) / spec.field_magnitude < 0.05);
}

TEST_CASE("coefficient is linear in the passivity factor") {
    const RoughSurface s1(small_plane(), 0.2 * kLambda, 0.0, 1.0);
    const RoughSurface s2(small_plane(), 0.2 * kLambda, 0.0, 0.37);
    const SurfaceRealization r1 = sample_surface(s1, kLambda / 8.0, 11);
    const SurfaceRealization r2 = sample_surface(s2, kLambda / 8.0, 11);
    const Point3 tx(0.2, -0.1, 4.0), rx(-0.3, 0.2, 0.8);
    const auto c1 = hf_coefficient(tx, rx, r1, kWavenumber);
    const auto c2 = hf_coefficient(tx, rx, r2, kWavenumber);
    CHECK(std::abs(c2 - 0.37 * c1) <= 1e-12 * std::abs(c1));
}

TEST_CASE("tx/rx swap leaves the coefficient unchanged") {
    const RoughSurface s(small_plane(), 0.3 * kLambda, 0.0);
    const SurfaceRealization real = sample_surface(s, kLambda / 8.0, 21);
    const Point3 a(0.4, 0.1, 3.0), b(-0.2, -0.3, 1.1);
    const auto cab = hf_coefficient(a, b, real, kWavenumber);
    const auto cba = hf_coefficient(b, a, real, kWavenumber);
    CHECK(std::abs(cab - cba) <= 1e-12 * std::abs(cab));
}

TEST_CASE("1x1 channel matrix equals the scalar coefficient") {
    const RoughSurface s(small_plane(), 0.1 * kLambda, 0.0);
    const SurfaceRealization real = sample_surface(s, kLambda / 8.0, 31);
    const ArrayGeometry tx(std::vector<Point3>{Point3(0, 0, 4)});
    const ArrayGeometry rx(std::vector<Point3>{Point3(0.3, 0, 1)});
    const ChannelMatrix m = hf_channel_matrix(tx, rx, real, kWavenumber);
    CHECK(m.provenance == Provenance::oracle);
    REQUIRE(m.entries.rows() == 1);
    REQUIRE(m.entries.cols() == 1);
    const auto c = hf_coefficient(tx.element(0), rx.element(0), real, kWavenumber);
    CHECK(std::abs(m.entries(0, 0) - c) == 0.0);
}

TEST_CASE("matrix reciprocity: swapping arrays transposes the matrix") {
    const RoughSurface s(small_plane(), 0.2 * kLambda, 0.0);
    const SurfaceRealization real = sample_surface(s, kLambda / 8.0, 41);
    const ArrayGeometry a = make_ula({0.1, 0, 4.0}, 2, 0.5 * kLambda, {0, 1, 0});
    const ArrayGeometry b = make_ula({-0.2, 0.1, 1.2}, 3, 0.5 * kLambda, {1, 0, 0});
    const ChannelMatrix mab = hf_channel_matrix(a, b, real, kWavenumber);
    const ChannelMatrix mba = hf_channel_matrix(b, a, real, kWavenumber);
    CHECK((mab.entries - mba.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("flat 2x2 far matrix has equal magnitudes within 1%") {
    const RoughSurface s(small_plane(), 0.0, 0.0);
    const SurfaceRealization real = sample_surface(s, kLambda / 8.0, 1);
    const ArrayGeometry tx = make_upa({0, 0, 6.0}, 2, 1, 0.5 * kLambda, {1, 0, 0}, {0, 1, 0});
    const ArrayGeometry rx = make_upa({0, 0, 2.0}, 2, 1, 0.5 * kLambda, {1, 0, 0}, {0, 1, 0});
    const ChannelMatrix m = hf_channel_matrix(tx, rx, real, kWavenumber);
    const double ref = std::abs(m.entries(0, 0));
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) CHECK(std::abs(std::abs(m.entries(i, j)) - ref) <= 0.01 * ref);
}

TEST_CASE("validation errors") {
    const RoughSurface s(small_plane(), 0.0, 0.0);
    const SurfaceRealization real = sample_surface(s, kLambda / 8.0, 1);
    CHECK_THROWS_AS(hf_coefficient({0, 0, -1.0}, {0, 0, 1}, real, kWavenumber), std::invalid_argument);
    CHECK_THROWS_AS(hf_coefficient({0, 0, 1.0}, {0, 0, 0.0}, real, kWavenumber), std::invalid_argument);
    // Grid coarser than lambda/4 aliases the phase.
    const SurfaceRealization coarse = sample_surface(s, kLambda / 2.0, 1);
    CHECK_THROWS_AS(hf_coefficient({0, 0, 1.0}, {0, 0, 2.0}, coarse, kWavenumber), std::invalid_argument);
}

TEST_CASE("reduction is stable across block sizes and shared-sweep evaluation") {
    const RoughSurface s(small_plane(), 0.25 * kLambda, 0.0);
    const SurfaceRealization real = sample_surface(s, kLambda / 8.0, 55);
    const Point3 tx(0, 0, 5);
    const std::vector<Point3> rx = {Point3(0.2, 0, 1.0), Point3(-0.1, 0.3, 0.8)};
    HFConfig a;
    a.block_rows = 16;
    HFConfig b;
    b.block_rows = 128;
    const auto va = hf_coefficients(tx, rx, real, kWavenumber, a);
    const auto vb = hf_coefficients(tx, rx, real, kWavenumber, b);
    for (std::size_t i = 0; i < rx.size(); ++i) CHECK(std::abs(va[i] - vb[i]) <= 1e-11 * std::abs(va[i]));
    // Same config twice is bit-identical.
    const auto vc = hf_coefficients(tx, rx, real, kWavenumber, a);
    CHECK(va[0] == vc[0]);
    CHECK(va[1] == vc[1]);
}

TEST_CASE("constant-amplitude mode approaches the exact mode for far geometry") {
    const RoughSurface s(small_plane(), 0.0, 0.0);
    const SurfaceRealization real = sample_surface(s, kLambda / 8.0, 1);
    const Point3 tx(0, 0, 8.0), rx(0.1, 0, 5.0);
    HFConfig exact;
    HFConfig approx;
    approx.exact_amplitude = false;
    const auto ce = hf_coefficient(tx, rx, real, kWavenumber, exact);
    const auto ca = hf_coefficient(tx, rx, real, kWavenumber, approx);
    CHECK(std::abs(ca - ce) / std::abs(ce) < 0.05);
}

TEST_CASE("exact-slope area element stays a small diagnostic correction") {
    const RoughSurface s(small_plane(), 0.1 * kLambda, 5.0 * kLambda);
    const SurfaceRealization real = sample_surface(s, kLambda / 8.0, 77);
    const Point3 tx(0, 0, 5.0), rx(0, 0, 1.0);
    HFConfig plain;
    HFConfig sloped;
    sloped.exact_area_element = true;
    const auto cp = hf_coefficient(tx, rx, real, kWavenumber, plain);
    const auto cs = hf_coefficient(tx, rx, real, kWavenumber, sloped);
    CHECK(std::abs(cs - cp) / std::abs(cp) < 0.05);
    CHECK(std::abs(cs - cp) > 0.0);
}
