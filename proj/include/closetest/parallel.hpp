// Copyright 2026 The closetest Authors
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

#ifndef CLOSETEST_PARALLEL_HPP_
#define CLOSETEST_PARALLEL_HPP_

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace closetest {

inline int default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(i) for i in [0, count).  Work items must write only to their own
// slots; callers seed randomness per item, so results are identical for any
// thread count.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (threads > count) threads = static_cast<int>(count);
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count || failed.load(std::memory_order_relaxed)) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace closetest

#endif  // CLOSETEST_PARALLEL_HPP_
