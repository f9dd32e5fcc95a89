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

#ifndef QTL_FRAME_H_
#define QTL_FRAME_H_

#include <cassert>
#include <cstdint>
#include <vector>

namespace qtl {

struct Dims {
  int w = 0;
  int h = 0;

  friend bool operator==(const Dims&, const Dims&) = default;
};

// Single-plane 8-bit luma raster, row-major.
struct FrameBuffer {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> samples;

  FrameBuffer() = default;
  FrameBuffer(int w, int h, uint8_t fill = 0)
      : width(w), height(h), samples(static_cast<size_t>(w) * h, fill) {}

  uint8_t at(int x, int y) const {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return samples[static_cast<size_t>(y) * width + x];
  }
  uint8_t& at(int x, int y) {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return samples[static_cast<size_t>(y) * width + x];
  }
  Dims dims() const { return {width, height}; }

  friend bool operator==(const FrameBuffer&, const FrameBuffer&) = default;
};

struct SequenceHeader {
  int width = 0;
  int height = 0;
  int64_t frame_count = 0;
  int fps_num = 25;  // informational only
  int fps_den = 1;
};

// Rasterized leaf-block depths of one frame, values 0..4.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> depths;

  DepthMap() = default;
  DepthMap(int w, int h, uint8_t fill = 0)
      : width(w), height(h), depths(static_cast<size_t>(w) * h, fill) {}

  uint8_t at(int x, int y) const {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return depths[static_cast<size_t>(y) * width + x];
  }
  uint8_t& at(int x, int y) {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return depths[static_cast<size_t>(y) * width + x];
  }

  friend bool operator==(const DepthMap&, const DepthMap&) = default;
};

}  // namespace qtl

#endif  // QTL_FRAME_H_
