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

#ifndef QTL_SYNTH_CLIP_H_
#define QTL_SYNTH_CLIP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "qtl/frame.h"

namespace qtl {

// Deterministic procedural test content: mixtures of flat regions, smooth
// gradients, fine texture, and moving high-contrast objects, so partition
// decisions spread over all depths at typical QPs.
enum class ClipPreset {
  kPanningScene,    // textured ground + flat sky, global pan
  kOrbitingBlocks,  // static background, textured objects on orbits
  kNoisyField,      // dense fine texture with a flat stripe
};

const char* clip_preset_name(ClipPreset preset);
bool clip_preset_from_name(const std::string& name, ClipPreset* out);

struct ClipSpec {
  int width = 512;
  int height = 256;
  int frames = 60;
  uint64_t seed = 1;
  ClipPreset preset = ClipPreset::kPanningScene;
};

FrameBuffer synth_frame(const ClipSpec& spec, int t);
std::vector<FrameBuffer> synth_clip(const ClipSpec& spec);
void write_synth_y4m(const std::string& path, const ClipSpec& spec);

}  // namespace qtl

#endif  // QTL_SYNTH_CLIP_H_
