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

#ifndef QTL_SCALE_H_
#define QTL_SCALE_H_

#include "qtl/frame.h"

namespace qtl {

// Box-filter (area-average) downscale to target_w x target_h. Each output
// sample is the coverage-weighted mean of the source pixels under its cell,
// computed in exact integer arithmetic and rounded half-up to 8 bits.
// Throws std::invalid_argument if the target exceeds the source on any axis
// or is not positive.
FrameBuffer downscale(const FrameBuffer& frame, int target_w, int target_h);

// Rounds both dimensions up to multiples of 64 by replicating the last row
// and column. Returns the input unchanged when already aligned.
FrameBuffer pad_to_superblocks(const FrameBuffer& frame);

}  // namespace qtl

#endif  // QTL_SCALE_H_
