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

#ifndef QTL_NEIGHBORHOOD_H_
#define QTL_NEIGHBORHOOD_H_

#include <optional>
#include <vector>

#include "qtl/frame.h"
#include "qtl/rdo.h"

namespace qtl {

// Axis-aligned rectangle with real-valued edges, used for regions mapped
// across resolutions.
struct RealRect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};

// Maps a block rectangle from hi_dims coordinates into lo_dims coordinates
// (each axis scaled by lo/hi) and clips against the low-resolution bounds.
// The result may be empty when the block lies entirely in padding beyond
// the low-resolution frame.
RealRect colocate(const BlockRect& rect, Dims hi_dims, Dims lo_dims);

// Neighborhood geometry for the average-depth estimate of a block of depth
// `depth`: the block's co-located rectangle grown by `margin` low-resolution
// pixels on every side.
struct NeighborhoodSpec {
  int margin = 0;  // 0 or a multiple of 8 in [8, 128]
  int depth = 0;   // 0..3

  friend bool operator==(const NeighborhoodSpec&,
                         const NeighborhoodSpec&) = default;
};

// Candidate margins searched during calibration: multiples of 8 in [8, 128].
std::vector<int> default_margin_grid();

// Per-depth-threshold summed-area tables over a depth map, for O(1)
// area-weighted queries of the fraction of pixels at depth >= k (k = 1..4).
class DepthMapIndex {
 public:
  explicit DepthMapIndex(const DepthMap& map);

  int width() const { return width_; }
  int height() const { return height_; }

  // Area-weighted mean of the indicator [depth >= spec.depth + 1] over
  // `region` expanded by spec.margin and clipped to the map. Pixels cut by
  // the region boundary contribute in proportion to their covered area.
  // Empty after clipping -> nullopt.
  std::optional<double> try_mean(const RealRect& region,
                                 const NeighborhoodSpec& spec) const;

 private:
  uint64_t box_count(int k, int x0, int y0, int x1, int y1) const;

  int width_;
  int height_;
  std::vector<uint32_t> sat_[4];  // indicator depth >= k, k = index + 1
};

// Average split indicator over the co-located neighborhood; always in [0,1].
// Throws std::domain_error when the expanded region does not intersect the
// map. Prefer DepthMapIndex::try_mean on hot paths: this convenience wrapper
// rebuilds the index per call.
double neighborhood_mean(const DepthMap& map, const RealRect& region,
                         const NeighborhoodSpec& spec);

double neighborhood_mean(const DepthMapIndex& index, const RealRect& region,
                         const NeighborhoodSpec& spec);

}  // namespace qtl

#endif  // QTL_NEIGHBORHOOD_H_
