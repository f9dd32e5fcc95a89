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
//
// Independent reference implementations used to pin expected values. They
// deliberately avoid the library's code paths: plain per-pixel loops,
// exhaustive enumeration, and naive grid scans.

#ifndef QTL_TESTS_SUPPORT_ORACLES_H_
#define QTL_TESTS_SUPPORT_ORACLES_H_

#include <optional>
#include <vector>

#include "qtl/frame.h"
#include "qtl/metrics.h"
#include "qtl/neighborhood.h"
#include "qtl/rdo.h"
#include "qtl/trainer.h"

namespace qtl::oracle {

// Area-average downscale, one output pixel at a time, overlap arithmetic in
// plain integers scaled by the target dimensions.
FrameBuffer area_average(const FrameBuffer& src, int tw, int th);

// Mean, then sum of squared deviations, straight from the pixels.
double sse(const FrameBuffer& frame, const BlockRect& rect);

// Every legal partition tree of a square block, costs composed bottom-up
// with the library leaf cost. Enumeration order is lexicographic in
// pre-order mode choices (NONE < HORZ < VERT < SPLIT4), children ordered
// top-left first.
std::vector<PartitionTree> all_partition_trees(const PlaneStats& plane,
                                               const BlockRect& rect,
                                               const RdoConfig& cfg);

// First tree of minimal cost in enumeration order.
PartitionTree best_tree_by_enumeration(const PlaneStats& plane,
                                       const BlockRect& rect,
                                       const RdoConfig& cfg);

// Coverage-weighted indicator mean over the expanded region, one pixel at a
// time. nullopt when the clipped region is empty.
std::optional<double> neighborhood_mean(const DepthMap& map,
                                        const RealRect& region,
                                        const NeighborhoodSpec& spec);

// Naive scan of the full (margin, tau) grid per depth.
InferenceModel calibrate(const TrainingSet& set, const TrainerOptions& opts);

// Bjontegaard deltas with an exact 4-point Vandermonde polynomial solve and
// trapezoid integration.
double bd_rate(const RdCurve& reference, const RdCurve& test);
double bd_psnr(const RdCurve& reference, const RdCurve& test);

}  // namespace qtl::oracle

#endif  // QTL_TESTS_SUPPORT_ORACLES_H_
