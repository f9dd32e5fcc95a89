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

#include "qtl/raw_io.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qtl/error.h"

namespace qtl {

namespace {

void put_u32le(std::ofstream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

bool get_u32le(std::ifstream& in, uint32_t* v) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) return false;
  *v = static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
       (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
  return true;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

}  // namespace

void write_luma_dump(const std::string& path,
                     const std::vector<FrameBuffer>& frames) {
  if (frames.empty())
    throw std::invalid_argument("write_luma_dump: no frames");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open for writing");
  out.write("QLDM", 4);
  put_u32le(out, static_cast<uint32_t>(frames[0].width));
  put_u32le(out, static_cast<uint32_t>(frames[0].height));
  for (const FrameBuffer& f : frames) {
    if (f.width != frames[0].width || f.height != frames[0].height)
      throw std::invalid_argument("write_luma_dump: mixed frame dimensions");
    out.write(reinterpret_cast<const char*>(f.samples.data()),
              static_cast<std::streamsize>(f.samples.size()));
  }
  if (!out) fail(path, "write failed");
}

std::vector<FrameBuffer> read_luma_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "QLDM", 4) != 0)
    fail(path, "missing QLDM magic");
  uint32_t w = 0, h = 0;
  if (!get_u32le(in, &w) || !get_u32le(in, &h) || w == 0 || h == 0)
    fail(path, "invalid QLDM dimensions");

  std::vector<FrameBuffer> frames;
  const size_t frame_bytes = static_cast<size_t>(w) * h;
  for (;;) {
    FrameBuffer f(static_cast<int>(w), static_cast<int>(h));
    in.read(reinterpret_cast<char*>(f.samples.data()),
            static_cast<std::streamsize>(frame_bytes));
    if (in.gcount() == 0) break;
    if (in.gcount() != static_cast<std::streamsize>(frame_bytes)) {
      std::ostringstream msg;
      msg << "truncated frame " << frames.size();
      fail(path, msg.str());
    }
    frames.push_back(std::move(f));
  }
  if (frames.empty()) fail(path, "stream contains no frames");
  return frames;
}

void write_depth_maps(const std::string& path, const std::vector<DepthMap>& maps,
                      uint32_t first_frame_index) {
  if (maps.empty()) throw std::invalid_argument("write_depth_maps: no maps");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open for writing");
  for (size_t i = 0; i < maps.size(); ++i) {
    const DepthMap& m = maps[i];
    out.write("QLDP", 4);
    put_u32le(out, static_cast<uint32_t>(m.width));
    put_u32le(out, static_cast<uint32_t>(m.height));
    put_u32le(out, first_frame_index + static_cast<uint32_t>(i));
    out.write(reinterpret_cast<const char*>(m.depths.data()),
              static_cast<std::streamsize>(m.depths.size()));
  }
  if (!out) fail(path, "write failed");
}

std::vector<DepthMap> read_depth_maps(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  std::vector<DepthMap> maps;
  for (;;) {
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() == 0) break;
    if (in.gcount() != 4 || std::memcmp(magic, "QLDP", 4) != 0)
      fail(path, "missing QLDP magic");
    uint32_t w = 0, h = 0, index = 0;
    if (!get_u32le(in, &w) || !get_u32le(in, &h) || !get_u32le(in, &index) ||
        w == 0 || h == 0)
      fail(path, "invalid QLDP header");
    DepthMap m(static_cast<int>(w), static_cast<int>(h));
    in.read(reinterpret_cast<char*>(m.depths.data()),
            static_cast<std::streamsize>(m.depths.size()));
    if (in.gcount() != static_cast<std::streamsize>(m.depths.size())) {
      std::ostringstream msg;
      msg << "truncated depth map " << maps.size();
      fail(path, msg.str());
    }
    for (uint8_t d : m.depths)
      if (d > 4) fail(path, "depth value out of range");
    maps.push_back(std::move(m));
  }
  if (maps.empty()) fail(path, "stream contains no depth maps");
  return maps;
}

}  // namespace qtl
