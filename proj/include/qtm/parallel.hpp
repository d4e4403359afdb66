// Copyright 2026 The qtm-patterns Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdlib>
#include <string_view>
#include <thread>
#include <vector>

namespace qtm {

/// Worker count: hardware concurrency, capped by QTM_THREADS when set.
inline std::size_t default_thread_count() {
    std::size_t n = std::max(1U, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("QTM_THREADS")) {
        const std::string_view text{env};
        std::size_t cap = 0;
        const auto res =
            std::from_chars(text.data(), text.data() + text.size(), cap);
        if (res.ec == std::errc{} && cap > 0) {
            n = std::min(n, cap);
        }
    }
    return n;
}

/**
 * @brief Runs body(lo, hi) over disjoint chunks of [0, count).
 *
 * With threads <= 1 (or a single chunk) the body runs inline on the calling
 * thread, so sequential and parallel paths execute identical arithmetic.
 */
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body &&body) {
    threads = std::min(threads, count);
    if (threads <= 1) {
        body(std::size_t{0}, count);
        return;
    }
    const std::size_t chunk = (count + threads - 1) / threads;
    std::vector<std::jthread> workers;
    workers.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) {
            break;
        }
        workers.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    body(std::size_t{0}, std::min(count, chunk));
}

} // namespace qtm
