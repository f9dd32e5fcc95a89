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

#ifndef QTL_TESTS_SUPPORT_TEST_UTIL_H_
#define QTL_TESTS_SUPPORT_TEST_UTIL_H_

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "qtl/frame.h"
#include "qtl/rng.h"

namespace qtl::testutil {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("qtl-" + tag + "-" + std::to_string(std::rand()) + "-" +
             std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline FrameBuffer random_frame(int w, int h, uint64_t seed) {
  FrameBuffer f(w, h);
  Rng rng(seed);
  for (auto& s : f.samples) s = static_cast<uint8_t>(rng.next_u64() & 0xff);
  return f;
}

// Piecewise content: flat areas, gradients, and noisy patches, so partition
// searches exercise every mode.
inline FrameBuffer structured_frame(int w, int h, uint64_t seed) {
  FrameBuffer f(w, h);
  Rng rng(seed);
  const int region = 32;
  for (int by = 0; by < h; by += region) {
    for (int bx = 0; bx < w; bx += region) {
      const uint64_t kind = rng.next_u64() % 4;
      const uint8_t base = static_cast<uint8_t>(rng.next_u64() % 200 + 28);
      for (int y = by; y < std::min(by + region, h); ++y) {
        for (int x = bx; x < std::min(bx + region, w); ++x) {
          switch (kind) {
            case 0:  // flat
              f.at(x, y) = base;
              break;
            case 1:  // horizontal ramp
              f.at(x, y) = static_cast<uint8_t>((base + (x - bx) * 2) & 0xff);
              break;
            case 2:  // checker edge
              f.at(x, y) = ((x - bx) / 8 + (y - by) / 8) % 2 ? 230 : 30;
              break;
            default:  // noise
              f.at(x, y) = static_cast<uint8_t>(rng.next_u64() & 0xff);
          }
        }
      }
    }
  }
  return f;
}

}  // namespace qtl::testutil

#endif  // QTL_TESTS_SUPPORT_TEST_UTIL_H_
