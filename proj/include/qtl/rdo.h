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

#ifndef QTL_RDO_H_
#define QTL_RDO_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "qtl/frame.h"

namespace qtl {

// Partition choices of a square block. Two-way splits are terminal: the
// resulting non-square halves cannot be partitioned again. Only SPLIT4
// recurses. Enumerator order is the tie-break order of the search.
enum class PartitionMode : uint8_t { kNone = 0, kHorz = 1, kVert = 2, kSplit4 = 3 };

const char* partition_mode_name(PartitionMode mode);

struct BlockRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool is_square() const { return w == h; }
  friend bool operator==(const BlockRect&, const BlockRect&) = default;
};

// Depth of a block by its longer edge: 0 for 64x64, 4 for 4x4. A 32x16
// block has depth 1, like the 32x32 square it was cut from.
int block_depth(const BlockRect& rect);

struct RdoConfig {
  int qp = 27;
  double lambda = 0.0;       // set via make_rdo_config
  double split_bits = 16.0;  // rate proxy per signaled partition decision
  double header_bits = 8.0;  // rate proxy per coded leaf
};

// lambda(qp) = 0.85 * 2^((qp-12)/3).
double lambda_for_qp(int qp);

RdoConfig make_rdo_config(int qp, double split_bits = 16.0,
                          double header_bits = 8.0);

struct PartitionTree {
  BlockRect rect;
  PartitionMode mode = PartitionMode::kNone;
  double cost = 0.0;
  std::vector<PartitionTree> children;  // 0, 2, or 4 nodes

  bool is_leaf() const { return children.empty(); }
};

bool tree_equal(const PartitionTree& a, const PartitionTree& b);

// Per-frame summed-area tables of sample values and their squares, giving
// O(1) mean/SSE queries for any rectangle.
class PlaneStats {
 public:
  explicit PlaneStats(const FrameBuffer& frame);

  int width() const { return width_; }
  int height() const { return height_; }
  uint64_t rect_sum(const BlockRect& rect) const;
  uint64_t rect_sum2(const BlockRect& rect) const;

 private:
  int width_;
  int height_;
  std::vector<uint64_t> sum_;   // (w+1) x (h+1)
  std::vector<uint64_t> sum2_;
};

// DC-prediction leaf cost: sum of squared deviations from the block mean,
// plus lambda * header_bits.
double leaf_cost(const PlaneStats& plane, const BlockRect& rect,
                 const RdoConfig& cfg);

// Recomputes the recursive cost of a tree bottom-up from fresh leaf costs.
// Matches PartitionTree::cost exactly for trees produced by rdo_search.
double tree_cost(const PlaneStats& plane, const PartitionTree& tree,
                 const RdoConfig& cfg);

// Hook consulted before the 4-way split candidate of a square block is
// searched. Returning true prunes that candidate; the non-split and 2-way
// candidates are always evaluated.
class EarlyTerminator {
 public:
  virtual ~EarlyTerminator() = default;
  virtual bool should_terminate(const BlockRect& rect) const = 0;
};

// Permits everything: plain full-search behavior.
class NullTerminator final : public EarlyTerminator {
 public:
  bool should_terminate(const BlockRect&) const override { return false; }
};

const NullTerminator& null_terminator();

// Full rate-distortion search over the partition quadtree rooted at `rect`
// (a square block inside the plane). Candidates are scored in the fixed
// order NONE, HORZ, VERT, SPLIT4 and ties keep the earlier mode.
// `node_count` is incremented once per candidate scored.
PartitionTree rdo_search(const PlaneStats& plane, const BlockRect& rect,
                         const RdoConfig& cfg, const EarlyTerminator& term,
                         uint64_t& node_count);

// Candidate count of a full search of one square block of the given size;
// depends on geometry only.
uint64_t full_search_node_count(int block_size);

// Rasterizes leaf depths into `map` over the area of `tree`. Pixels under a
// 2-way split are recorded at the depth of the parent square, so the map
// only ever reflects 4-way split decisions.
void tree_to_depthmap(const PartitionTree& tree, DepthMap& map);

struct FrameSearchResult {
  std::vector<PartitionTree> trees;  // by superblock, raster order
  uint64_t nodes = 0;
  double cost = 0.0;
};

// Runs rdo_search over every 64x64 superblock of a padded frame. Superblocks
// are independent; `threads` > 1 distributes them over worker threads
// (0 = hardware concurrency). Results do not depend on the thread count.
FrameSearchResult search_frame(const FrameBuffer& frame, const RdoConfig& cfg,
                               const EarlyTerminator& term, int threads = 1);

// Depth map of a whole searched frame.
DepthMap depthmap_from_trees(const std::vector<PartitionTree>& trees, int width,
                             int height);

}  // namespace qtl

#endif  // QTL_RDO_H_
