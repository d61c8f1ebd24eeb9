// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>

#include "nfchan/rng.hpp"
#include "nfchan/surface.hpp"

using namespace nfchan;

namespace {
PlaneSpec meter_plane() {
    return PlaneSpec(Point3(0, 0, 0), Point3(0, 0, 1), Point3(1, 0, 0), Point3(0, 1, 0), 1.0, 1.0);
}
}  // namespace

TEST_CASE("sigma_z = 0 gives an all-zero field") {
    const RoughSurface s(meter_plane(), 0.0, 0.0);
    const SurfaceRealization r = sample_surface(s, 0.01, 5);
    for (double h : r.heights()) CHECK(h == 0.0);
}

TEST_CASE("same seed gives a bit-identical field") {
    for (double ell : {0.0, 0.02}) {
        const RoughSurface s(meter_plane(), 1e-3, ell);
        const SurfaceRealization a = sample_surface(s, 0.005, 77);
        const SurfaceRealization b = sample_surface(s, 0.005, 77);
        REQUIRE(a.heights().size() == b.heights().size());
        CHECK(std::memcmp(a.heights().data(), b.heights().data(), a.heights().size() * sizeof(double)) == 0);
        const SurfaceRealization c = sample_surface(s, 0.005, 78);
        CHECK(std::memcmp(a.heights().data(), c.heights().data(), a.heights().size() * sizeof(double)) != 0);
    }
}

TEST_CASE("grid covers the full extent with cells no coarser than requested") {
    const RoughSurface s(meter_plane(), 1e-3, 0.0);
    const SurfaceRealization r = sample_surface(s, 0.003, 1);
    CHECK(r.n_u() * r.step_u() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.n_v() * r.step_v() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.step_u() <= 0.003);
    // Cell midpoints: first at -extent/2 + step/2.
    CHECK(r.coord_u(0) == doctest::Approx(-0.5 + 0.5 * r.step_u()).epsilon(1e-12));
}

TEST_CASE("empirical variance and autocorrelation of the correlated field") {
    // sigma_z = 1 mm, ell = 10 mm on a (100 ell)^2 = 1 m^2 surface at 1 mm step.
    const double sigma = 1e-3, ell = 10e-3;
    const RoughSurface s(meter_plane(), sigma, ell);
    const int n_realizations = 50;
    double var_sum = 0.0, ac_sum = 0.0;
    for (int k = 0; k < n_realizations; ++k) {
        const SurfaceRealization r = sample_surface(s, 1e-3, split_seed(2024, k));
        double mean = 0.0;
        for (double h : r.heights()) mean += h;
        mean /= static_cast<double>(r.heights().size());
        double var = 0.0;
        for (double h : r.heights()) var += (h - mean) * (h - mean);
        var_sum += var / static_cast<double>(r.heights().size());
        ac_sum += empirical_autocorr(r, ell);
    }
    const double var = var_sum / n_realizations;
    const double ac = ac_sum / n_realizations;
    CHECK(std::abs(var - sigma * sigma) <= 0.05 * sigma * sigma);
    CHECK(std::abs(ac - std::exp(-1.0)) < 0.05);
}

TEST_CASE("uncorrelated field decorrelates after one grid step") {
    const RoughSurface s(meter_plane(), 1e-3, 0.0);
    double ac_sum = 0.0;
    const int n = 50;
    for (int k = 0; k < n; ++k) ac_sum += empirical_autocorr(sample_surface(s, 0.005, split_seed(9, k)), 0.005);
    CHECK(std::abs(ac_sum / n) < 0.05);
}

TEST_CASE("empirical_autocorr contract") {
    const RoughSurface s(meter_plane(), 1e-3, 0.0);
    const SurfaceRealization r = sample_surface(s, 0.01, 3);
    CHECK(empirical_autocorr(r, 0.0) == 1.0);
    CHECK_THROWS(empirical_autocorr(r, 0.0152));           // not a multiple of the step
    CHECK_THROWS(empirical_autocorr(r, 0.7));              // beyond half extent
    const RoughSurface flat(meter_plane(), 0.0, 0.0);
    CHECK_THROWS(empirical_autocorr(sample_surface(flat, 0.01, 3), 0.01));  // zero variance
}

TEST_CASE("sample_surface pre-conditions and warnings") {
    const RoughSurface s(meter_plane(), 1e-3, 0.004);
    CHECK_THROWS_AS(sample_surface(s, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_surface(s, 0.3, 1), std::invalid_argument);  // > extent/4
    const SurfaceRealization coarse = sample_surface(s, 0.01, 1);       // > ell/2
    CHECK(!coarse.warnings().empty());
    const SurfaceRealization fine = sample_surface(s, 0.002, 1);
    CHECK(fine.warnings().empty());
}

TEST_CASE("RoughSurface validation") {
    CHECK_THROWS_AS(RoughSurface(meter_plane(), -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(RoughSurface(meter_plane(), 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(RoughSurface(meter_plane(), 0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(RoughSurface(meter_plane(), 0.0, 0.0, 1.5), std::invalid_argument);
}

TEST_CASE("binary export writes the documented little-endian layout") {
    const RoughSurface s(meter_plane(), 2e-3, 0.0);
    const SurfaceRealization r = sample_surface(s, 0.25, 42);
    const std::string path = (std::filesystem::temp_directory_path() / "nfchan_surface_test.bin").string();
    save_realization(r, path);

    std::FILE* f = std::fopen(path.c_str(), "rb");
    REQUIRE(f);
    auto read_u64 = [&] {
        unsigned char b[8];
        REQUIRE(std::fread(b, 1, 8, f) == 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    };
    auto read_f64 = [&] {
        const std::uint64_t bits = read_u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    };
    CHECK(read_u64() == static_cast<std::uint64_t>(r.n_u()));
    CHECK(read_u64() == static_cast<std::uint64_t>(r.n_v()));
    CHECK(read_f64() == r.step_u());
    CHECK(read_f64() == r.step_v());
    CHECK(read_f64() == s.sigma_z);
    CHECK(read_f64() == s.corr_len);
    CHECK(read_u64() == 42);
    for (double h : r.heights()) CHECK(read_f64() == h);
    std::fclose(f);
    std::filesystem::remove(path);
}
