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

#include "qtl/scale.h"

#include <algorithm>
#include <stdexcept>

namespace qtl {

namespace {

// Coverage of source pixel `i` (axis cell [i*t, (i+1)*t)) by target cell
// [c*s, (c+1)*s), both scaled by t so everything stays integral.
struct AxisSpan {
  int begin;                   // first covered source index
  int end;                     // one past last
  std::vector<int64_t> weight;  // overlap * target_dim per index
};

AxisSpan axis_span(int cell, int source_dim, int target_dim) {
  // Target cell in source coordinates scaled by target_dim.
  int64_t a = static_cast<int64_t>(cell) * source_dim;
  int64_t b = a + source_dim;
  AxisSpan span;
  span.begin = static_cast<int>(a / target_dim);
  span.end = static_cast<int>((b + target_dim - 1) / target_dim);
  span.weight.resize(span.end - span.begin);
  for (int i = span.begin; i < span.end; ++i) {
    int64_t lo = std::max<int64_t>(a, static_cast<int64_t>(i) * target_dim);
    int64_t hi =
        std::min<int64_t>(b, static_cast<int64_t>(i + 1) * target_dim);
    span.weight[i - span.begin] = hi - lo;
  }
  return span;
}

}  // namespace

FrameBuffer downscale(const FrameBuffer& frame, int target_w, int target_h) {
  if (target_w <= 0 || target_h <= 0)
    throw std::invalid_argument("downscale: target must be positive");
  if (target_w > frame.width || target_h > frame.height)
    throw std::invalid_argument("downscale: upscaling is not supported");

  FrameBuffer out(target_w, target_h);
  // Denominator of the exact mean: every weight below is (coverage * tw * th)
  // and the covered area per cell is (sw/tw) * (sh/th).
  const uint64_t denom = static_cast<uint64_t>(frame.width) * frame.height;

  std::vector<AxisSpan> col_spans(target_w);
  for (int cx = 0; cx < target_w; ++cx)
    col_spans[cx] = axis_span(cx, frame.width, target_w);

  for (int cy = 0; cy < target_h; ++cy) {
    AxisSpan rows = axis_span(cy, frame.height, target_h);
    for (int cx = 0; cx < target_w; ++cx) {
      const AxisSpan& cols = col_spans[cx];
      uint64_t acc = 0;
      for (int sy = rows.begin; sy < rows.end; ++sy) {
        const uint8_t* row = &frame.samples[static_cast<size_t>(sy) * frame.width];
        uint64_t row_acc = 0;
        for (int sx = cols.begin; sx < cols.end; ++sx)
          row_acc += static_cast<uint64_t>(cols.weight[sx - cols.begin]) * row[sx];
        acc += row_acc * static_cast<uint64_t>(rows.weight[sy - rows.begin]);
      }
      // Round half-up.
      out.at(cx, cy) = static_cast<uint8_t>((2 * acc + denom) / (2 * denom));
    }
  }
  return out;
}

FrameBuffer pad_to_superblocks(const FrameBuffer& frame) {
  if (frame.width <= 0 || frame.height <= 0)
    throw std::invalid_argument("pad_to_superblocks: empty frame");
  int pw = (frame.width + 63) / 64 * 64;
  int ph = (frame.height + 63) / 64 * 64;
  if (pw == frame.width && ph == frame.height) return frame;

  FrameBuffer out(pw, ph);
  for (int y = 0; y < ph; ++y) {
    int sy = std::min(y, frame.height - 1);
    const uint8_t* src = &frame.samples[static_cast<size_t>(sy) * frame.width];
    uint8_t* dst = &out.samples[static_cast<size_t>(y) * pw];
    std::copy(src, src + frame.width, dst);
    std::fill(dst + frame.width, dst + pw, src[frame.width - 1]);
  }
  return out;
}

}  // namespace qtl
