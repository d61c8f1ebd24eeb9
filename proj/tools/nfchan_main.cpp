// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <CLI11.hpp>
#include <cstdio>

#include "nfchan/acceptance.hpp"
#include "nfchan/experiments.hpp"
#include "nfchan/scenario.hpp"

#ifndef NFCHAN_DEFAULT_SCENARIO_DIR
#define NFCHAN_DEFAULT_SCENARIO_DIR "scenarios"
#endif

int main(int argc, char** argv) {
    CLI::App app{"Near-field MIMO channel experiments with non-ideal surface reflections"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "Run one named experiment and write CSV tables");
    std::string experiment;
    std::string scenario_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool has_seed = false;
    bool fast = false;
    run->add_option("experiment", experiment,
                    "regimes | pdf | correlation | length-correlation | sinr-tradeoff | smr | sumrate")
        ->required();
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seed", seed, "Override the scenario seed")->each([&](const std::string&) { has_seed = true; });
    run->add_flag("--fast", fast, "Halve realizations and double the oracle grid step");

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite and print pass/fail per criterion");
    std::string scenario_dir = NFCHAN_DEFAULT_SCENARIO_DIR;
    bool verify_fast = false;
    int only = 0;
    verify->add_option("--scenario-dir", scenario_dir, "Directory with the bundled scenario files");
    verify->add_flag("--fast", verify_fast, "Reduced realizations with correspondingly loosened tolerances");
    verify->add_option("--criterion", only, "Run a single criterion (1..9)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        nfchan::ScenarioConfig scenario;
        try {
            scenario = nfchan::load_scenario(scenario_path);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return 1;
        }
        nfchan::RunOptions opts;
        opts.fast = fast;
        opts.seed_override = seed;
        opts.has_seed_override = has_seed;
        return nfchan::run_experiment(experiment, scenario, out_dir, opts);
    }

    nfchan::AcceptanceOptions opts;
    opts.scenario_dir = scenario_dir;
    opts.fast = verify_fast;
    opts.only = only;
    return nfchan::report_acceptance(nfchan::run_acceptance(opts));
}
