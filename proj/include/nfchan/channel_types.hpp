// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <Eigen/Dense>

namespace nfchan {

enum class Provenance { oracle, analytic_deterministic, analytic_sampled };

// Complex N_rx x N_tx channel matrix tagged with how it was produced.
struct ChannelMatrix {
    Eigen::MatrixXcd entries;
    Provenance provenance = Provenance::analytic_deterministic;

    Eigen::Index n_rx() const { return entries.rows(); }
    Eigen::Index n_tx() const { return entries.cols(); }
};

}  // namespace nfchan
