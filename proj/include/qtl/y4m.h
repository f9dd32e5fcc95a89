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

#ifndef QTL_Y4M_H_
#define QTL_Y4M_H_

#include <cstdint>
#include <fstream>
#include <string>

#include "qtl/frame.h"

namespace qtl {

// Streaming YUV4MPEG2 reader. Only the luma plane is surfaced; chroma is
// skipped. Supported chroma modes: 4:2:0 (any C420* tag) and 4:0:0 (Cmono).
// 8-bit only.
class Y4mReader {
 public:
  explicit Y4mReader(const std::string& path);

  const SequenceHeader& header() const { return header_; }

  // Reads the next luma plane into `out`. Returns false at end of stream.
  // Throws ParseError on a malformed FRAME marker or truncated payload.
  bool next(FrameBuffer& out);

  // Rewinds to the first frame.
  void rewind();

 private:
  void parse_stream_header();

  std::ifstream file_;
  std::string path_;
  SequenceHeader header_;
  int64_t data_start_ = 0;
  int64_t chroma_bytes_ = 0;  // per frame, after the luma plane
  int64_t frame_index_ = 0;
};

enum class Y4mChroma {
  k420,  // chroma planes written as constant mid-gray
  kMono,
};

class Y4mWriter {
 public:
  Y4mWriter(const std::string& path, const SequenceHeader& header,
            Y4mChroma chroma = Y4mChroma::k420);

  void write(const FrameBuffer& frame);

 private:
  std::ofstream file_;
  std::string path_;
  int width_;
  int height_;
  Y4mChroma chroma_;
  std::vector<uint8_t> chroma_fill_;
};

void write_y4m(const std::string& path, const SequenceHeader& header,
               const std::vector<FrameBuffer>& frames,
               Y4mChroma chroma = Y4mChroma::k420);

}  // namespace qtl

#endif  // QTL_Y4M_H_
