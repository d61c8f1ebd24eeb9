// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace nfchan {

// Number of worker threads. Defaults to the hardware concurrency; the
// NFCHAN_THREADS environment variable overrides it.
int worker_count();

// Runs fn(i) for i in [0, n) on the worker pool. Work items are claimed
// dynamically; callers that need deterministic results must write to
// index-addressed slots and combine in a fixed order afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Pairwise (tree) reduction in index order. The result depends only on the
// slot values, not on which thread produced them.
template <typename T>
T tree_reduce(std::vector<T> v) {
    if (v.empty()) return T{};
    std::size_t n = v.size();
    while (n > 1) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
        if (n % 2 == 1) {
            v[half] = v[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    return v[0];
}

}  // namespace nfchan
