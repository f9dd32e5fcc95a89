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

#ifndef QTL_RAW_IO_H_
#define QTL_RAW_IO_H_

#include <string>
#include <vector>

#include "qtl/frame.h"

namespace qtl {

// Raw luma dump: little-endian header {"QLDM", u32 width, u32 height}
// followed by width*height bytes per frame, frames back to back.
void write_luma_dump(const std::string& path,
                     const std::vector<FrameBuffer>& frames);
std::vector<FrameBuffer> read_luma_dump(const std::string& path);

// Depth-map stream: per frame {"QLDP", u32 width, u32 height,
// u32 frame_index} followed by width*height depth bytes (0..4).
// Maps may be concatenated in one file.
void write_depth_maps(const std::string& path,
                      const std::vector<DepthMap>& maps,
                      uint32_t first_frame_index = 0);
std::vector<DepthMap> read_depth_maps(const std::string& path);

}  // namespace qtl

#endif  // QTL_RAW_IO_H_
