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

#include "qtl/y4m.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "qtl/error.h"

namespace qtl {

namespace {

constexpr const char kMagic[] = "YUV4MPEG2";
constexpr size_t kMagicLen = 9;

[[noreturn]] void parse_fail(const std::string& path, int64_t offset,
                             const std::string& what) {
  std::ostringstream msg;
  msg << path << ": " << what << " at byte offset " << offset;
  throw ParseError(msg.str());
}

}  // namespace

Y4mReader::Y4mReader(const std::string& path) : path_(path) {
  file_.open(path, std::ios::binary);
  if (!file_) throw ParseError(path + ": cannot open file");
  parse_stream_header();
}

void Y4mReader::parse_stream_header() {
  std::string line;
  if (!std::getline(file_, line) || line.empty())
    parse_fail(path_, 0, "empty file, missing YUV4MPEG2 signature");
  if (line.size() < kMagicLen || line.compare(0, kMagicLen, kMagic) != 0)
    parse_fail(path_, 0, "missing YUV4MPEG2 signature");

  int width = 0, height = 0;
  std::string chroma = "420";  // historical default when no C tag is present
  size_t pos = kMagicLen;
  while (pos < line.size()) {
    if (line[pos] != ' ')
      parse_fail(path_, static_cast<int64_t>(pos), "expected space before tag");
    size_t tag_start = ++pos;
    size_t tag_end = line.find(' ', tag_start);
    if (tag_end == std::string::npos) tag_end = line.size();
    if (tag_end == tag_start)
      parse_fail(path_, static_cast<int64_t>(tag_start), "empty header tag");
    std::string value = line.substr(tag_start + 1, tag_end - tag_start - 1);
    switch (line[tag_start]) {
      case 'W':
        width = std::atoi(value.c_str());
        if (width <= 0)
          parse_fail(path_, static_cast<int64_t>(tag_start), "invalid W tag");
        break;
      case 'H':
        height = std::atoi(value.c_str());
        if (height <= 0)
          parse_fail(path_, static_cast<int64_t>(tag_start), "invalid H tag");
        break;
      case 'F': {
        int num = 0, den = 0;
        if (std::sscanf(value.c_str(), "%d:%d", &num, &den) == 2 && num > 0 &&
            den > 0) {
          header_.fps_num = num;
          header_.fps_den = den;
        }
        break;
      }
      case 'C':
        chroma = value;
        break;
      case 'I':
      case 'A':
      case 'X':
        break;  // ignored
      default:
        parse_fail(path_, static_cast<int64_t>(tag_start), "unknown header tag");
    }
    pos = tag_end;
  }
  if (width <= 0 || height <= 0)
    parse_fail(path_, static_cast<int64_t>(kMagicLen), "missing W or H tag");

  if (chroma.rfind("420", 0) == 0) {
    // Any 4:2:0 variant: two quarter-size chroma planes follow the luma.
    chroma_bytes_ =
        2 * (static_cast<int64_t>((width + 1) / 2) * ((height + 1) / 2));
  } else if (chroma == "mono") {
    chroma_bytes_ = 0;
  } else {
    throw ParseError(path_ + ": unsupported chroma sampling C" + chroma +
                     " (only 4:2:0 and mono are handled)");
  }

  header_.width = width;
  header_.height = height;
  data_start_ = file_.tellg();

  // Count frames by walking the FRAME markers once.
  const int64_t payload = static_cast<int64_t>(width) * height + chroma_bytes_;
  int64_t count = 0;
  for (;;) {
    int64_t marker_off = file_.tellg();
    std::string frame_line;
    if (!std::getline(file_, frame_line)) break;
    if (frame_line.compare(0, 5, "FRAME") != 0)
      parse_fail(path_, marker_off, "expected FRAME marker");
    int64_t payload_start = file_.tellg();
    file_.seekg(payload, std::ios::cur);
    if (!file_.good() || file_.peek() == EOF) {
      file_.clear();
      file_.seekg(0, std::ios::end);
      if (static_cast<int64_t>(file_.tellg()) - payload_start < payload) {
        std::ostringstream msg;
        msg << path_ << ": truncated payload in frame " << count;
        throw ParseError(msg.str());
      }
      ++count;
      break;
    }
    ++count;
  }
  if (count == 0) parse_fail(path_, data_start_, "stream contains no frames");
  header_.frame_count = count;

  rewind();
}

void Y4mReader::rewind() {
  file_.clear();
  file_.seekg(data_start_);
  frame_index_ = 0;
}

bool Y4mReader::next(FrameBuffer& out) {
  int64_t marker_off = file_.tellg();
  std::string frame_line;
  if (!std::getline(file_, frame_line)) return false;
  if (frame_line.compare(0, 5, "FRAME") != 0)
    parse_fail(path_, marker_off, "expected FRAME marker");

  out.width = header_.width;
  out.height = header_.height;
  out.samples.resize(static_cast<size_t>(header_.width) * header_.height);
  file_.read(reinterpret_cast<char*>(out.samples.data()),
             static_cast<std::streamsize>(out.samples.size()));
  if (file_.gcount() != static_cast<std::streamsize>(out.samples.size())) {
    std::ostringstream msg;
    msg << path_ << ": truncated luma plane in frame " << frame_index_;
    throw ParseError(msg.str());
  }
  if (chroma_bytes_ > 0) file_.seekg(chroma_bytes_, std::ios::cur);
  ++frame_index_;
  return true;
}

Y4mWriter::Y4mWriter(const std::string& path, const SequenceHeader& header,
                     Y4mChroma chroma)
    : path_(path),
      width_(header.width),
      height_(header.height),
      chroma_(chroma) {
  file_.open(path, std::ios::binary | std::ios::trunc);
  if (!file_) throw ParseError(path + ": cannot open file for writing");
  file_ << "YUV4MPEG2 W" << width_ << " H" << height_ << " F"
        << header.fps_num << ":" << header.fps_den << " Ip A1:1 C"
        << (chroma == Y4mChroma::k420 ? "420jpeg" : "mono") << "\n";
  if (chroma == Y4mChroma::k420) {
    chroma_fill_.assign(
        2 * (static_cast<size_t>((width_ + 1) / 2) * ((height_ + 1) / 2)), 128);
  }
}

void Y4mWriter::write(const FrameBuffer& frame) {
  if (frame.width != width_ || frame.height != height_)
    throw std::invalid_argument("Y4mWriter: frame dimensions changed");
  file_ << "FRAME\n";
  file_.write(reinterpret_cast<const char*>(frame.samples.data()),
              static_cast<std::streamsize>(frame.samples.size()));
  if (!chroma_fill_.empty())
    file_.write(reinterpret_cast<const char*>(chroma_fill_.data()),
                static_cast<std::streamsize>(chroma_fill_.size()));
  if (!file_) throw ParseError(path_ + ": write failed");
}

void write_y4m(const std::string& path, const SequenceHeader& header,
               const std::vector<FrameBuffer>& frames, Y4mChroma chroma) {
  Y4mWriter writer(path, header, chroma);
  for (const FrameBuffer& f : frames) writer.write(f);
}

}  // namespace qtl
