// Copyright 2026 The ergosub Authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace ergosub {

// Width used by parallel sweeps when a caller passes threads == 0.
// Defaults to std::thread::hardware_concurrency().
[[nodiscard]] unsigned default_thread_count();
void set_default_thread_count(unsigned threads);

// Runs body(i) for i in [0, count) on up to `threads` workers, each taking a
// contiguous block of indices. Bodies must only write to their own slots;
// results are then independent of the thread count.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t)>& body) {
  parallel_for(count, 0, body);
}

}  // namespace ergosub
