// Copyright 2026 The Heteraug Authors
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

namespace heteraug {

/// Worker count resolution order: explicit request > HETERAUG_THREADS env
/// var > hardware concurrency. Always >= 1.
int resolve_thread_count(int requested = 0);

/// Run fn(i) for i in [0, n) on `threads` workers (atomic work stealing).
/// Results must be written to per-index slots; the schedule is
/// non-deterministic but slot writes make outputs order-independent.
/// The first exception thrown by any item is rethrown after all join.
void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn);

}  // namespace heteraug
