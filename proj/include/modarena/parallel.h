// Copyright 2026 The modarena Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MODARENA_PARALLEL_H_
#define MODARENA_PARALLEL_H_

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace modarena {

// Runs fn(i) for i in [0, n) on up to `jobs` threads with a static
// round-robin assignment. The first exception thrown by any worker is
// rethrown after all workers finish.
inline void ParallelFor(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::clamp(jobs, 1, std::max(n, 1));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(jobs);
  for (int w = 0; w < jobs; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += jobs) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace modarena

#endif  // MODARENA_PARALLEL_H_
