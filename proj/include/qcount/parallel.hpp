// Copyright 2026 The qcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace qcount {

/// Worker count: explicit request, else QCL_THREADS, else hardware parallelism.
inline int worker_count(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QCL_THREADS"); env != nullptr && *env != '\0') {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs `trials` independent trials and histograms their integer outcomes.
///
/// `make_trial()` is called once per worker and must return a callable
/// `std::uint64_t(std::uint64_t trial_index)` returning an outcome < `bins`.
/// Each worker keeps its own integer counts; the reduction is an element-wise
/// sum, so the result does not depend on the worker count or scheduling.
template <class MakeTrial>
std::vector<std::uint64_t> count_outcomes(std::uint64_t trials, std::size_t bins, MakeTrial&& make_trial,
                                          int workers = 0) {
    const int nworkers =
        static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(worker_count(workers)),
                                                 std::max<std::uint64_t>(trials, 1)));
    constexpr std::uint64_t kChunk = 64;
    std::atomic<std::uint64_t> next{0};
    std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(nworkers),
                                                    std::vector<std::uint64_t>(bins, 0));
    std::exception_ptr failure;
    std::mutex failure_mu;

    const auto work = [&](int w) {
        try {
            auto trial = make_trial();
            auto& counts = partial[static_cast<std::size_t>(w)];
            for (;;) {
                const std::uint64_t begin = next.fetch_add(kChunk);
                if (begin >= trials) break;
                const std::uint64_t end = std::min(trials, begin + kChunk);
                for (std::uint64_t t = begin; t < end; ++t) ++counts.at(trial(t));
            }
        } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next.store(trials);
        }
    };

    if (nworkers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nworkers));
        for (int w = 0; w < nworkers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<std::uint64_t> total(bins, 0);
    for (const auto& c : partial)
        for (std::size_t i = 0; i < bins; ++i) total[i] += c[i];
    return total;
}

}  // namespace qcount
