// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nfchan/experiments.hpp"
#include "nfchan/scenario.hpp"

using namespace nfchan;
using nlohmann::json;

#ifndef NFCHAN_SCENARIO_DIR
#define NFCHAN_SCENARIO_DIR "scenarios"
#endif

namespace {
std::string scenario_path(const char* name) { return std::string(NFCHAN_SCENARIO_DIR) + "/" + name; }
}  // namespace

TEST_CASE("paper_va scenario loads and echoes the Section V-A setup") {
    const ScenarioConfig cfg = load_scenario(scenario_path("paper_va.json"));
    CHECK(cfg.frequency_hz == 28e9);
    CHECK(cfg.wavelength() == doctest::Approx(0.0107).epsilon(0.01));
    REQUIRE(cfg.reflectors.size() == 1);
    const PlaneSpec& plane = cfg.reflectors[0].surface.plane;
    CHECK(plane.extent_u() == 3.0);
    CHECK(plane.extent_v() == 3.0);
    CHECK((cfg.bs_array().center() - Point3(0, 0, 90)).norm() < 1e-12);
    CHECK(cfg.reflectors[0].surface.passivity == 1.0);

    // Echo round-trip: the resolved config reparses to the same scenario.
    const ScenarioConfig echoed = parse_scenario(json::parse(cfg.to_json()));
    CHECK(echoed.frequency_hz == cfg.frequency_hz);
    CHECK(echoed.oracle.realizations == cfg.oracle.realizations);
    CHECK(echoed.experiments_json == cfg.experiments_json);
}

TEST_CASE("paper_vb scenario loads and echoes the Section V-B setup") {
    const ScenarioConfig cfg = load_scenario(scenario_path("paper_vb.json"));
    CHECK(cfg.frequency_hz == 60e9);
    REQUIRE(cfg.users.size() == 2);
    CHECK((cfg.users[0].position - Point3(13, -13, -5)).norm() < 1e-12);
    CHECK((cfg.users[1].position - Point3(11, -11, -5)).norm() < 1e-12);
    CHECK(cfg.bs_n_u == 400);
    CHECK(cfg.bs_n_v == 10);
    CHECK(cfg.bs_spacing_effective() == doctest::Approx(0.5 * cfg.wavelength()).epsilon(1e-12));

    // Wall at x = 15, y in [-27, -17], z in [-5, 5].
    const PlaneSpec& wall = cfg.reflectors[0].surface.plane;
    CHECK((wall.origin() - Point3(15, -22, 0)).norm() < 1e-12);
    CHECK(wall.extent_u() == 10.0);
    CHECK(wall.extent_v() == 10.0);
    CHECK(std::abs(wall.normal().dot(Point3(1, 0, 0))) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(cfg.noise.bandwidth_hz == 20e6);
    CHECK(cfg.noise.n0_dbm_hz == -174.0);
    CHECK(cfg.noise.noise_figure_db == 6.0);
    CHECK(cfg.pathloss.beta_db == -68.0);
    CHECK(cfg.pathloss.exponent == 2.0);
}

TEST_CASE("strict validation names the offending field") {
    SUBCASE("missing frequency") {
        CHECK_THROWS_WITH_AS(parse_scenario(json::parse(R"({"bs_array": {}})")),
                             doctest::Contains("frequency_hz"), std::runtime_error);
    }
    SUBCASE("unknown top-level field") {
        CHECK_THROWS_WITH_AS(parse_scenario(json::parse(R"({"frequency_hz": 1e9, "frequencyy": 2})")),
                             doctest::Contains("frequencyy"), std::runtime_error);
    }
    SUBCASE("unknown nested field") {
        CHECK_THROWS_WITH_AS(
            parse_scenario(json::parse(R"({"frequency_hz": 1e9, "bs_array": {"n_uu": 4}})")),
            doctest::Contains("n_uu"), std::runtime_error);
    }
    SUBCASE("missing file") { CHECK_THROWS(load_scenario("/nonexistent/nope.json")); }
}

TEST_CASE("assemble_channel composes the configured paths") {
    ScenarioConfig cfg;
    cfg.frequency_hz = 28e9;
    cfg.bs_center = Point3(0, 0, 0);
    cfg.bs_n_u = 8;
    cfg.bs_n_v = 1;
    cfg.users.push_back({Point3(5, 1, 0), 1});

    SUBCASE("no scatterers or reflectors gives a pure LOS channel") {
        const AssembledChannel ch = assemble_channel(cfg, 0, 1);
        const ArrayGeometry tx = cfg.bs_array();
        const ArrayGeometry rx(std::vector<Point3>{cfg.users[0].position});
        const ChannelMatrix los = los_matrix(tx, rx, cfg.wavenumber());
        const double d = (cfg.users[0].position - tx.center()).norm();
        const double c0 = cfg.pathloss.amplitude(d);
        CHECK((ch.matrix.entries - c0 * los.entries).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(std::abs(std::abs(ch.gains.c0) - c0) <= 1e-12 * c0);
        CHECK(ch.gains.c_bar.empty());
    }

    SUBCASE("reflector Rician identity k_bar * d_virt = loss * d_los") {
        PlaneSpec wall(Point3(8, 0, 0), Point3(-1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1), 4.0, 4.0);
        cfg.reflectors.push_back({RoughSurface(wall, 0.0, 0.0, 1.0, 0.6), std::nullopt});
        const AssembledChannel ch = assemble_channel(cfg, 0, 1);
        REQUIRE(ch.gains.k_bar.size() == 1);
        const double d_los = (cfg.users[0].position - cfg.bs_array().center()).norm();
        const Point3 vu = mirror_point(cfg.users[0].position, wall);
        const double d_virt = (vu - cfg.bs_array().center()).norm();
        CHECK(ch.gains.k_bar[0] * d_virt == doctest::Approx(0.6 * d_los).epsilon(1e-12));
        CHECK(ch.gains.k_tilde[0] == 0.0);  // smooth wall has no stochastic part
    }

    SUBCASE("k_bar target solve warns when it implies gain") {
        PlaneSpec wall(Point3(8, 0, 0), Point3(-1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1), 4.0, 4.0);
        cfg.reflectors.push_back({RoughSurface(wall, 0.0, 0.0, 1.0, 1.0), 1.0});
        const AssembledChannel ch = assemble_channel(cfg, 0, 1);
        CHECK(ch.gains.k_bar[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(!ch.warnings.empty());
    }

    SUBCASE("scatterer gain uses the double path-loss product") {
        const Point3 s(2.0, 3.0, 0);
        cfg.scatterers.push_back({s, 1.0});
        const AssembledChannel ch = assemble_channel(cfg, 0, 1);
        REQUIRE(ch.gains.c_hat.size() == 1);
        const double beta = std::pow(10.0, cfg.pathloss.beta_db / 10.0);
        const double d1 = (s - cfg.bs_array().center()).norm();
        const double d2 = (cfg.users[0].position - s).norm();
        const double expected_hat = std::sqrt(beta) / (d1 * d2);
        CHECK(std::abs(std::abs(ch.gains.c_hat[0]) - expected_hat) <= 1e-12 * expected_hat);
    }
}

TEST_CASE("Section V-B LOS gain follows the path-loss law") {
    const ScenarioConfig cfg = load_scenario(scenario_path("paper_vb.json"));
    const AssembledChannel ch = assemble_channel(cfg, 0, 1);
    const double d = std::sqrt(13.0 * 13 + 13 * 13 + 5 * 5);
    // |c0|^2 in dB = beta_dB - 10 eta log10(d / d0).
    const double expected_db = -68.0 - 20.0 * std::log10(d);
    CHECK(10.0 * std::log10(std::norm(ch.gains.c0)) == doctest::Approx(expected_db).epsilon(1e-9));
}

TEST_CASE("sum_rate reductions") {
    ScenarioConfig cfg;
    cfg.frequency_hz = 28e9;
    cfg.bs_n_u = 64;
    cfg.bs_n_v = 1;
    cfg.noise.bandwidth_hz = 20e6;
    cfg.noise.noise_figure_db = 6.0;
    cfg.users.push_back({Point3(5, 1, 0), 1});

    SUBCASE("zero power gives zero rate") {
        CHECK(sum_rate(cfg, ServingStrategy::los_only, 0.0, 1) == 0.0);
    }
    SUBCASE("single user has no interference: exactly log2(1 + SNR)") {
        const double pt = 0.01;
        const AssembledChannel ch = assemble_channel(cfg, 0, 1);
        const Beamformer q = nf_focus_beamformer(cfg.bs_array(), cfg.users[0].position, cfg.wavenumber());
        const double snr =
            std::norm(project(ch.matrix.entries.row(0).transpose(), q)) * pt / cfg.noise.noise_power_w();
        CHECK(sum_rate(cfg, ServingStrategy::los_only, pt, 1) ==
              doctest::Approx(std::log2(1.0 + snr)).epsilon(1e-12));
    }
    SUBCASE("NLOS strategy requires a reflector") {
        CHECK_THROWS_AS(sum_rate(cfg, ServingStrategy::nlos_only, 0.01, 1), std::invalid_argument);
    }
    SUBCASE("partitioned-array serving splits the aperture between users") {
        cfg.users.push_back({Point3(4, -2, 0), 1});
        SumRateOptions opts;
        opts.partitioned_array = true;
        const double partitioned = sum_rate(cfg, ServingStrategy::los_only, 0.01, 1, opts);
        const double full = sum_rate(cfg, ServingStrategy::los_only, 0.01, 1);
        CHECK(partitioned > 0.0);
        CHECK(full > 0.0);
        CHECK(partitioned != full);
    }
}

TEST_CASE("experiment CSV output is byte-identical for the same scenario and seed") {
    const ScenarioConfig cfg = load_scenario(scenario_path("paper_fig3.json"));
    const auto dir1 = std::filesystem::temp_directory_path() / "nfchan_csv_det_1";
    const auto dir2 = std::filesystem::temp_directory_path() / "nfchan_csv_det_2";
    RunOptions opts;
    REQUIRE(run_experiment("sinr-tradeoff", cfg, dir1.string(), opts) == 0);
    REQUIRE(run_experiment("sinr-tradeoff", cfg, dir2.string(), opts) == 0);
    for (const auto& entry : std::filesystem::directory_iterator(dir1)) {
        if (entry.path().extension() != ".csv") continue;
        std::ifstream a(entry.path()), b(dir2 / entry.path().filename());
        REQUIRE(a);
        REQUIRE(b);
        const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
        const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
        CHECK(sa == sb);
        CHECK(!sa.empty());
        CHECK(sa.find('\r') == std::string::npos);  // LF line endings
    }
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("unknown experiment name fails with exit code 1") {
    const ScenarioConfig cfg = load_scenario(scenario_path("paper_fig3.json"));
    CHECK(run_experiment("does-not-exist", cfg, std::filesystem::temp_directory_path().string()) == 1);
}
