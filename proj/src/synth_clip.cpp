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

#include "qtl/synth_clip.h"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "qtl/rng.h"
#include "qtl/y4m.h"

namespace qtl {

namespace {

double lattice(uint64_t seed, uint32_t layer, int64_t ix, int64_t iy) {
  const uint64_t h = derive_seed(seed + layer * 0x9e3779b9ull,
                                 static_cast<uint64_t>(ix),
                                 static_cast<uint64_t>(iy));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smoothstep(double f) { return f * f * (3.0 - 2.0 * f); }

// Smooth value noise in [0,1); `layer` decorrelates octaves.
double value_noise(uint64_t seed, uint32_t layer, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int64_t ix = static_cast<int64_t>(fx);
  const int64_t iy = static_cast<int64_t>(fy);
  const double tx = smoothstep(x - fx);
  const double ty = smoothstep(y - fy);
  const double v00 = lattice(seed, layer, ix, iy);
  const double v10 = lattice(seed, layer, ix + 1, iy);
  const double v01 = lattice(seed, layer, ix, iy + 1);
  const double v11 = lattice(seed, layer, ix + 1, iy + 1);
  const double a = v00 + (v10 - v00) * tx;
  const double b = v01 + (v11 - v01) * tx;
  return a + (b - a) * ty;
}

// Centered noise scaled to +-amp.
double cnoise(uint64_t seed, uint32_t layer, double x, double y, double amp) {
  return (value_noise(seed, layer, x, y) - 0.5) * 2.0 * amp;
}

uint8_t quantize(double v) {
  const long q = std::lround(v);
  return static_cast<uint8_t>(q < 0 ? 0 : (q > 255 ? 255 : q));
}

double panning_scene(const ClipSpec& s, int t, int x, int y) {
  const double px = x + 1.6 * t;
  const double py = y + 0.35 * t;
  const double horizon = 0.36 * s.height;
  if (y < horizon) {
    // Sky: vertical gradient with a soft large-scale wash.
    return 58.0 + 0.22 * y + cnoise(s.seed, 0, px / 170.0, py / 170.0, 9.0);
  }
  // Ground: coarse relief plus fine texture gated by a patchiness mask, so
  // detailed and smooth areas coexist.
  const double mask = value_noise(s.seed, 3, px / 120.0, y / 120.0);
  double v = 112.0 + cnoise(s.seed, 1, px / 46.0, py / 46.0, 34.0);
  v += mask * cnoise(s.seed, 2, px / 10.0, py / 10.0, 42.0);
  return v;
}

double orbiting_blocks(const ClipSpec& s, int t, int x, int y) {
  double v = 96.0 + cnoise(s.seed, 5, x / 72.0, y / 72.0, 22.0);
  const double tau = 6.283185307179586;
  for (int i = 0; i < 3; ++i) {
    const double phase = tau * i / 3.0;
    const double omega = tau * (0.008 + 0.004 * i);
    const double cx = s.width * (0.25 + 0.25 * i) +
                      0.14 * s.width * std::cos(omega * t + phase);
    const double cy =
        s.height * 0.5 + 0.22 * s.height * std::sin(omega * t + phase);
    const double half = 0.09 * std::min(s.width, s.height) + 6.0 * i;
    if (std::fabs(x - cx) < half && std::fabs(y - cy) < half) {
      // Texture anchored to the object so it travels with it.
      v = 132.0 + cnoise(s.seed, 10 + i, (x - cx) / 6.5, (y - cy) / 6.5, 52.0);
    }
  }
  return v;
}

double noisy_field(const ClipSpec& s, int t, int x, int y) {
  const double stripe_top = 0.42 * s.height;
  const double stripe_bottom = 0.58 * s.height;
  if (y >= stripe_top && y < stripe_bottom) {
    // Near-flat stripe with a gentle diagonal ramp.
    return 88.0 + 14.0 * (x + y) / (s.width + s.height);
  }
  double v = 118.0 + cnoise(s.seed, 20, (x + 0.9 * t) / 7.5, (y + 0.4 * t) / 7.5,
                            46.0);
  v += cnoise(s.seed, 21, (x + 1.7 * t) / 34.0, y / 34.0, 18.0);
  return v;
}

}  // namespace

const char* clip_preset_name(ClipPreset preset) {
  switch (preset) {
    case ClipPreset::kPanningScene:
      return "pan";
    case ClipPreset::kOrbitingBlocks:
      return "orbit";
    case ClipPreset::kNoisyField:
      return "noise";
  }
  return "?";
}

bool clip_preset_from_name(const std::string& name, ClipPreset* out) {
  if (name == "pan") {
    *out = ClipPreset::kPanningScene;
  } else if (name == "orbit") {
    *out = ClipPreset::kOrbitingBlocks;
  } else if (name == "noise") {
    *out = ClipPreset::kNoisyField;
  } else {
    return false;
  }
  return true;
}

FrameBuffer synth_frame(const ClipSpec& spec, int t) {
  if (spec.width <= 0 || spec.height <= 0)
    throw std::invalid_argument("synth_frame: empty geometry");
  FrameBuffer frame(spec.width, spec.height);
  for (int y = 0; y < spec.height; ++y) {
    uint8_t* row = &frame.samples[static_cast<size_t>(y) * spec.width];
    for (int x = 0; x < spec.width; ++x) {
      double v = 0.0;
      switch (spec.preset) {
        case ClipPreset::kPanningScene:
          v = panning_scene(spec, t, x, y);
          break;
        case ClipPreset::kOrbitingBlocks:
          v = orbiting_blocks(spec, t, x, y);
          break;
        case ClipPreset::kNoisyField:
          v = noisy_field(spec, t, x, y);
          break;
      }
      row[x] = quantize(v);
    }
  }
  return frame;
}

std::vector<FrameBuffer> synth_clip(const ClipSpec& spec) {
  std::vector<FrameBuffer> frames;
  frames.reserve(spec.frames);
  for (int t = 0; t < spec.frames; ++t) frames.push_back(synth_frame(spec, t));
  return frames;
}

void write_synth_y4m(const std::string& path, const ClipSpec& spec) {
  SequenceHeader header;
  header.width = spec.width;
  header.height = spec.height;
  header.frame_count = spec.frames;
  header.fps_num = 30;
  header.fps_den = 1;
  Y4mWriter writer(path, header);
  for (int t = 0; t < spec.frames; ++t) writer.write(synth_frame(spec, t));
}

}  // namespace qtl
