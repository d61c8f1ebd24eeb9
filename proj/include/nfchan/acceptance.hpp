// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <vector>

namespace nfchan {

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOptions {
    std::string scenario_dir = "scenarios";
    bool fast = false;     // halved realizations, doubled grid step, doubled tolerances
    int only = 0;          // run a single criterion (1..9); 0 runs all
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

// Prints one [PASS]/[FAIL] line per criterion; returns 0 if all pass, 3 otherwise.
int report_acceptance(const std::vector<CriterionResult>& results);

}  // namespace nfchan
