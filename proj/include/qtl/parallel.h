// Copyright 2026 the qtree-ladder authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QTL_PARALLEL_H_
#define QTL_PARALLEL_H_

#include <functional>

namespace qtl {

// 0 -> hardware concurrency, otherwise the request itself (min 1).
int resolve_threads(int requested);

// Runs fn(0..count-1) on up to `threads` workers. Tasks must be independent;
// completion order is unspecified. Serial when threads <= 1 or count <= 1.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace qtl

#endif  // QTL_PARALLEL_H_
