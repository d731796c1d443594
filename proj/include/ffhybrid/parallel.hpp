/*
   Copyright 2026 The ffhybrid Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ffh {

inline unsigned default_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

/// out[i] = fn(i) for i < n, computed by up to `threads` workers.
/// Results are placed by index, so the output does not depend on scheduling.
template <class F>
auto parallel_map(std::size_t n, F&& fn, unsigned threads = 0) -> std::vector<decltype(fn(std::size_t{}))> {
    using T = decltype(fn(std::size_t{}));
    std::vector<T> out(n);
    if (threads == 0) threads = default_threads();
    threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

/// Fixed-shape pairwise reduction: the association order depends only on the size.
template <class T>
T pairwise_sum(const T* v, std::size_t n) {
    if (n == 0) return T{};
    if (n == 1) return v[0];
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(v.data(), v.size());
}

}  // namespace ffh
