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

#include "qtl/rdo.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qtl/parallel.h"

namespace qtl {

const char* partition_mode_name(PartitionMode mode) {
  switch (mode) {
    case PartitionMode::kNone:
      return "NONE";
    case PartitionMode::kHorz:
      return "HORZ";
    case PartitionMode::kVert:
      return "VERT";
    case PartitionMode::kSplit4:
      return "SPLIT4";
  }
  return "?";
}

int block_depth(const BlockRect& rect) {
  int longer = std::max(rect.w, rect.h);
  assert(longer >= 4 && longer <= 64 && (longer & (longer - 1)) == 0);
  int d = 0;
  for (int s = 64; s > longer; s >>= 1) ++d;
  return d;
}

double lambda_for_qp(int qp) { return 0.85 * std::pow(2.0, (qp - 12) / 3.0); }

RdoConfig make_rdo_config(int qp, double split_bits, double header_bits) {
  RdoConfig cfg;
  cfg.qp = qp;
  cfg.lambda = lambda_for_qp(qp);
  cfg.split_bits = split_bits;
  cfg.header_bits = header_bits;
  return cfg;
}

bool tree_equal(const PartitionTree& a, const PartitionTree& b) {
  if (!(a.rect == b.rect) || a.mode != b.mode || a.cost != b.cost ||
      a.children.size() != b.children.size())
    return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!tree_equal(a.children[i], b.children[i])) return false;
  return true;
}

PlaneStats::PlaneStats(const FrameBuffer& frame)
    : width_(frame.width), height_(frame.height) {
  const size_t stride = static_cast<size_t>(width_) + 1;
  sum_.assign(stride * (height_ + 1), 0);
  sum2_.assign(stride * (height_ + 1), 0);
  for (int y = 0; y < height_; ++y) {
    uint64_t row = 0, row2 = 0;
    const uint8_t* src = &frame.samples[static_cast<size_t>(y) * width_];
    uint64_t* dst = &sum_[(y + 1) * stride];
    uint64_t* dst2 = &sum2_[(y + 1) * stride];
    const uint64_t* prev = &sum_[y * stride];
    const uint64_t* prev2 = &sum2_[y * stride];
    for (int x = 0; x < width_; ++x) {
      uint64_t v = src[x];
      row += v;
      row2 += v * v;
      dst[x + 1] = prev[x + 1] + row;
      dst2[x + 1] = prev2[x + 1] + row2;
    }
  }
}

uint64_t PlaneStats::rect_sum(const BlockRect& r) const {
  const size_t stride = static_cast<size_t>(width_) + 1;
  return sum_[(r.y + r.h) * stride + r.x + r.w] - sum_[r.y * stride + r.x + r.w] -
         sum_[(r.y + r.h) * stride + r.x] + sum_[r.y * stride + r.x];
}

uint64_t PlaneStats::rect_sum2(const BlockRect& r) const {
  const size_t stride = static_cast<size_t>(width_) + 1;
  return sum2_[(r.y + r.h) * stride + r.x + r.w] -
         sum2_[r.y * stride + r.x + r.w] - sum2_[(r.y + r.h) * stride + r.x] +
         sum2_[r.y * stride + r.x];
}

double leaf_cost(const PlaneStats& plane, const BlockRect& rect,
                 const RdoConfig& cfg) {
  assert(rect.x >= 0 && rect.y >= 0 && rect.x + rect.w <= plane.width() &&
         rect.y + rect.h <= plane.height());
  const uint64_t n = static_cast<uint64_t>(rect.w) * rect.h;
  const double s1 = static_cast<double>(plane.rect_sum(rect));
  const double s2 = static_cast<double>(plane.rect_sum2(rect));
  double sse = s2 - s1 * s1 / static_cast<double>(n);
  if (sse < 0.0) sse = 0.0;  // rounding dust on flat blocks
  return sse + cfg.lambda * cfg.header_bits;
}

const NullTerminator& null_terminator() {
  static const NullTerminator t;
  return t;
}

namespace {

PartitionTree leaf_node(const PlaneStats& plane, const BlockRect& rect,
                        const RdoConfig& cfg) {
  PartitionTree node;
  node.rect = rect;
  node.mode = PartitionMode::kNone;
  node.cost = leaf_cost(plane, rect, cfg);
  return node;
}

}  // namespace

PartitionTree rdo_search(const PlaneStats& plane, const BlockRect& rect,
                         const RdoConfig& cfg, const EarlyTerminator& term,
                         uint64_t& node_count) {
  assert(rect.is_square());

  PartitionTree best = leaf_node(plane, rect, cfg);
  ++node_count;
  if (rect.w < 8) return best;  // 4x4 admits no further partitioning

  const double split_rate = cfg.lambda * cfg.split_bits;
  const int half = rect.w / 2;

  {
    ++node_count;
    PartitionTree top =
        leaf_node(plane, {rect.x, rect.y, rect.w, half}, cfg);
    PartitionTree bottom =
        leaf_node(plane, {rect.x, rect.y + half, rect.w, half}, cfg);
    double cost = top.cost + bottom.cost + split_rate;
    if (cost < best.cost) {
      best.mode = PartitionMode::kHorz;
      best.cost = cost;
      best.children = {std::move(top), std::move(bottom)};
    }
  }
  {
    ++node_count;
    PartitionTree left =
        leaf_node(plane, {rect.x, rect.y, half, rect.h}, cfg);
    PartitionTree right =
        leaf_node(plane, {rect.x + half, rect.y, half, rect.h}, cfg);
    double cost = left.cost + right.cost + split_rate;
    if (cost < best.cost) {
      best.mode = PartitionMode::kVert;
      best.cost = cost;
      best.children = {std::move(left), std::move(right)};
    }
  }
  if (!term.should_terminate(rect)) {
    ++node_count;
    std::vector<PartitionTree> sub;
    sub.reserve(4);
    sub.push_back(rdo_search(plane, {rect.x, rect.y, half, half}, cfg, term,
                             node_count));
    sub.push_back(rdo_search(plane, {rect.x + half, rect.y, half, half}, cfg,
                             term, node_count));
    sub.push_back(rdo_search(plane, {rect.x, rect.y + half, half, half}, cfg,
                             term, node_count));
    sub.push_back(rdo_search(plane, {rect.x + half, rect.y + half, half, half},
                             cfg, term, node_count));
    double cost =
        sub[0].cost + sub[1].cost + sub[2].cost + sub[3].cost + split_rate;
    if (cost < best.cost) {
      best.mode = PartitionMode::kSplit4;
      best.cost = cost;
      best.children = std::move(sub);
    }
  }
  return best;
}

double tree_cost(const PlaneStats& plane, const PartitionTree& tree,
                 const RdoConfig& cfg) {
  const double split_rate = cfg.lambda * cfg.split_bits;
  switch (tree.mode) {
    case PartitionMode::kNone:
      return leaf_cost(plane, tree.rect, cfg);
    case PartitionMode::kHorz:
    case PartitionMode::kVert:
      return leaf_cost(plane, tree.children[0].rect, cfg) +
             leaf_cost(plane, tree.children[1].rect, cfg) + split_rate;
    case PartitionMode::kSplit4:
      return tree_cost(plane, tree.children[0], cfg) +
             tree_cost(plane, tree.children[1], cfg) +
             tree_cost(plane, tree.children[2], cfg) +
             tree_cost(plane, tree.children[3], cfg) + split_rate;
  }
  return 0.0;
}

uint64_t full_search_node_count(int block_size) {
  if (block_size <= 4) return 1;
  return 4 + 4 * full_search_node_count(block_size / 2);
}

void tree_to_depthmap(const PartitionTree& tree, DepthMap& map) {
  if (tree.mode == PartitionMode::kSplit4) {
    for (const PartitionTree& child : tree.children) tree_to_depthmap(child, map);
    return;
  }
  // NONE and the terminal 2-way splits all record the square's own depth.
  assert(tree.rect.x + tree.rect.w <= map.width &&
         tree.rect.y + tree.rect.h <= map.height);
  const uint8_t d = static_cast<uint8_t>(block_depth(tree.rect));
  for (int y = tree.rect.y; y < tree.rect.y + tree.rect.h; ++y) {
    uint8_t* row = &map.depths[static_cast<size_t>(y) * map.width];
    std::fill(row + tree.rect.x, row + tree.rect.x + tree.rect.w, d);
  }
}

FrameSearchResult search_frame(const FrameBuffer& frame, const RdoConfig& cfg,
                               const EarlyTerminator& term, int threads) {
  if (frame.width % 64 != 0 || frame.height % 64 != 0 || frame.width == 0 ||
      frame.height == 0)
    throw std::invalid_argument(
        "search_frame: frame must be padded to whole superblocks");

  const PlaneStats plane(frame);
  const int sb_cols = frame.width / 64;
  const int sb_rows = frame.height / 64;
  const int sb_count = sb_cols * sb_rows;

  FrameSearchResult result;
  result.trees.resize(sb_count);
  std::vector<uint64_t> nodes(sb_count, 0);

  parallel_for(sb_count, threads, [&](int i) {
    BlockRect rect{(i % sb_cols) * 64, (i / sb_cols) * 64, 64, 64};
    result.trees[i] = rdo_search(plane, rect, cfg, term, nodes[i]);
  });

  for (int i = 0; i < sb_count; ++i) {
    result.nodes += nodes[i];
    result.cost += result.trees[i].cost;
  }
  return result;
}

DepthMap depthmap_from_trees(const std::vector<PartitionTree>& trees, int width,
                             int height) {
  DepthMap map(width, height);
  for (const PartitionTree& tree : trees) tree_to_depthmap(tree, map);
  return map;
}

}  // namespace qtl
