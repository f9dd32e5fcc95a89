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

#include "qtl/neighborhood.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtl {

RealRect colocate(const BlockRect& rect, Dims hi_dims, Dims lo_dims) {
  const double sx = static_cast<double>(lo_dims.w) / hi_dims.w;
  const double sy = static_cast<double>(lo_dims.h) / hi_dims.h;
  RealRect r;
  r.x0 = rect.x * sx;
  r.x1 = (rect.x + rect.w) * sx;
  r.y0 = rect.y * sy;
  r.y1 = (rect.y + rect.h) * sy;
  r.x0 = std::clamp(r.x0, 0.0, static_cast<double>(lo_dims.w));
  r.x1 = std::clamp(r.x1, 0.0, static_cast<double>(lo_dims.w));
  r.y0 = std::clamp(r.y0, 0.0, static_cast<double>(lo_dims.h));
  r.y1 = std::clamp(r.y1, 0.0, static_cast<double>(lo_dims.h));
  return r;
}

std::vector<int> default_margin_grid() {
  std::vector<int> grid;
  for (int m = 8; m <= 128; m += 8) grid.push_back(m);
  return grid;
}

DepthMapIndex::DepthMapIndex(const DepthMap& map)
    : width_(map.width), height_(map.height) {
  const size_t stride = static_cast<size_t>(width_) + 1;
  for (int k = 1; k <= 4; ++k) {
    std::vector<uint32_t>& sat = sat_[k - 1];
    sat.assign(stride * (height_ + 1), 0);
    for (int y = 0; y < height_; ++y) {
      uint32_t row = 0;
      const uint8_t* src = &map.depths[static_cast<size_t>(y) * width_];
      uint32_t* dst = &sat[(y + 1) * stride];
      const uint32_t* prev = &sat[y * stride];
      for (int x = 0; x < width_; ++x) {
        row += src[x] >= k;
        dst[x + 1] = prev[x + 1] + row;
      }
    }
  }
}

uint64_t DepthMapIndex::box_count(int k, int x0, int y0, int x1, int y1) const {
  const size_t stride = static_cast<size_t>(width_) + 1;
  const std::vector<uint32_t>& sat = sat_[k - 1];
  return static_cast<uint64_t>(sat[y1 * stride + x1]) - sat[y0 * stride + x1] -
         sat[y1 * stride + x0] + sat[y0 * stride + x0];
}

namespace {

struct Span {
  double weight;  // per-pixel coverage of each column/row in the range
  int begin;
  int end;
};

// Splits the axis interval [a, b) into at most three pixel spans: a leading
// partial pixel, whole pixels, and a trailing partial pixel.
int build_spans(double a, double b, Span out[3]) {
  int ia = static_cast<int>(std::floor(a));
  int ib = static_cast<int>(std::floor(b));
  double fa = a - ia;
  double fb = b - ib;
  if (ia == ib) {
    out[0] = {b - a, ia, ia + 1};
    return 1;
  }
  int n = 0;
  int full_begin = ia;
  if (fa > 0.0) {
    out[n++] = {1.0 - fa, ia, ia + 1};
    full_begin = ia + 1;
  }
  if (full_begin < ib) out[n++] = {1.0, full_begin, ib};
  if (fb > 0.0) out[n++] = {fb, ib, ib + 1};
  return n;
}

}  // namespace

std::optional<double> DepthMapIndex::try_mean(const RealRect& region,
                                              const NeighborhoodSpec& spec) const {
  if (spec.depth < 0 || spec.depth > 3)
    throw std::invalid_argument("NeighborhoodSpec: depth must be in 0..3");
  if (spec.margin < 0)
    throw std::invalid_argument("NeighborhoodSpec: negative margin");

  const double x0 = std::max(region.x0 - spec.margin, 0.0);
  const double y0 = std::max(region.y0 - spec.margin, 0.0);
  const double x1 = std::min(region.x1 + spec.margin, static_cast<double>(width_));
  const double y1 = std::min(region.y1 + spec.margin, static_cast<double>(height_));
  if (x1 <= x0 || y1 <= y0) return std::nullopt;

  const int k = spec.depth + 1;
  Span xs[3], ys[3];
  const int nx = build_spans(x0, x1, xs);
  const int ny = build_spans(y0, y1, ys);

  double covered = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const uint64_t count =
          box_count(k, xs[i].begin, ys[j].begin, xs[i].end, ys[j].end);
      covered += xs[i].weight * ys[j].weight * static_cast<double>(count);
    }
  }
  const double area = (x1 - x0) * (y1 - y0);
  double mean = covered / area;
  // Clamp rounding dust so callers can rely on [0,1].
  return std::clamp(mean, 0.0, 1.0);
}

double neighborhood_mean(const DepthMapIndex& index, const RealRect& region,
                         const NeighborhoodSpec& spec) {
  std::optional<double> mean = index.try_mean(region, spec);
  if (!mean)
    throw std::domain_error(
        "neighborhood_mean: region does not intersect the depth map");
  return *mean;
}

double neighborhood_mean(const DepthMap& map, const RealRect& region,
                         const NeighborhoodSpec& spec) {
  return neighborhood_mean(DepthMapIndex(map), region, spec);
}

}  // namespace qtl
