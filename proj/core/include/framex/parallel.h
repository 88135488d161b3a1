// Copyright 2026 The framex Authors.
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

#ifndef FRAMEX_PARALLEL_H_
#define FRAMEX_PARALLEL_H_

#include <cstdint>
#include <functional>

namespace framex {

// Worker count: hardware concurrency capped by the FRAMEX_THREADS
// environment variable when it holds a positive integer.
int ThreadBudget();

// Calls fn(i) for i in [0, n). Work is split into contiguous chunks across
// ThreadBudget() threads; callers must make fn(i) independent of scheduling.
void ParallelFor(int64_t n, const std::function<void(int64_t)>& fn);

}  // namespace framex

#endif  // FRAMEX_PARALLEL_H_
