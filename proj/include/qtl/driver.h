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

#ifndef QTL_DRIVER_H_
#define QTL_DRIVER_H_

#include <array>
#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "qtl/frame.h"
#include "qtl/neighborhood.h"
#include "qtl/rdo.h"
#include "qtl/trainer.h"

namespace qtl {

// Per-group encoding schedule: the first train_count frames of every
// group_size frames run full search at both resolutions and recalibrate the
// model; the rest run with early termination.
struct GroupSchedule {
  int group_size = 50;
  int train_count = 5;
};

// Model-backed split gate for one high-resolution frame. Prunes the 4-way
// split candidate of a square block when the average split indicator of its
// co-located low-resolution neighborhood falls below the depth's trained
// threshold. Blocks whose co-located region lies outside the low-resolution
// frame are never terminated.
class ModelTerminator final : public EarlyTerminator {
 public:
  ModelTerminator(const InferenceModel& model, const DepthMapIndex& lo_index,
                  Dims hi_dims, Dims lo_dims);

  bool should_terminate(const BlockRect& rect) const override;

  // Fired terminations per depth, accumulated across all queries.
  std::array<uint64_t, 4> fires() const;

 private:
  const InferenceModel& model_;
  const DepthMapIndex& lo_index_;
  Dims hi_dims_;
  Dims lo_dims_;
  mutable std::array<std::atomic<uint64_t>, 4> fires_{};
};

struct FramePassStats {
  uint64_t nodes = 0;
  double cost = 0.0;
};

struct EncodeOptions {
  RdoConfig rdo;
  GroupSchedule schedule;
  TrainerOptions trainer;
  std::vector<int> margin_grid = default_margin_grid();
  int threads = 1;  // worker threads per frame search; 0 = hardware
  // Diagnostic switch: after calibration, force every depth's tau to 0 so
  // the termination rule can never fire. The accelerated pass then matches
  // full search bit for bit.
  bool force_tau_zero = false;
};

// Observer for per-frame artifacts; every hook is optional.
class FrameSink {
 public:
  virtual ~FrameSink() = default;
  virtual void on_lo_frame(int /*frame_index*/,
                           const std::vector<PartitionTree>& /*trees*/,
                           const DepthMap& /*map*/) {}
  virtual void on_hi_frame(int /*frame_index*/,
                           const std::vector<PartitionTree>& /*trees*/,
                           bool /*accelerated*/) {}
};

struct GroupResult {
  InferenceModel model;
  int train_frames = 0;
  std::vector<FramePassStats> hi_stats;  // per frame of the group
  std::vector<FramePassStats> lo_stats;
  std::array<uint64_t, 4> termination_fires{};
  double hi_wall_ms = 0.0;
  double lo_wall_ms = 0.0;
};

// Encodes one group: a full low-resolution pass on every frame, a full
// high-resolution pass on the training frames, calibration, then the
// model-gated high-resolution pass on the remaining frames. `hi_frames` and
// `lo_frames` are the padded rasters; `hi_dims`/`lo_dims` the unpadded
// target dimensions used for co-location. train_count may equal the group
// length, in which case no frame is accelerated.
GroupResult encode_group(const std::vector<FrameBuffer>& hi_frames,
                         const std::vector<FrameBuffer>& lo_frames,
                         Dims hi_dims, Dims lo_dims, const EncodeOptions& opts,
                         int first_frame_index = 0, FrameSink* sink = nullptr);

struct GroupCalibration {
  int first_frame = 0;
  int frames = 0;
  int train_frames = 0;
  InferenceModel model;
};

struct PassReport {
  uint64_t nodes = 0;
  double cost = 0.0;
  double wall_ms = 0.0;
  std::vector<FramePassStats> frames;
};

struct QpReport {
  int qp = 0;
  PassReport accelerated;  // high-resolution pass with early termination
  PassReport low_res;      // low-resolution pass (always full search)
  bool has_reference = false;
  PassReport reference;  // standalone full-search high-resolution pass
  std::array<uint64_t, 4> termination_fires{};
  std::vector<GroupCalibration> groups;
  uint64_t lo_digest = 0;             // depth-map bytes from the pipeline
  uint64_t lo_digest_standalone = 0;  // recomputed lo pass (reference runs)
};

struct LadderConfig {
  Dims hi;
  Dims lo;
  std::vector<int> qps = {22, 27, 32, 37};
  double split_bits = 16.0;
  double header_bits = 8.0;
  GroupSchedule schedule;
  TrainerOptions trainer;
  std::vector<int> margin_grid = default_margin_grid();
  int threads = 0;
  bool with_reference = false;  // also run the full-search pass for reporting
  bool force_tau_zero = false;
};

struct RunReport {
  std::string input;
  Dims hi;
  Dims lo;
  double epsilon = 0.1;
  GroupSchedule schedule;
  std::vector<QpReport> per_qp;
};

// Runs the two-resolution pipeline over a Y4M sequence for every configured
// QP. Frames are downscaled from the source to each rung, padded, and
// processed in groups per the schedule. With `with_reference` set, a full
// high-resolution pass and a standalone low-resolution pass run alongside
// for comparison.
RunReport run_ladder(const std::string& y4m_path, const LadderConfig& cfg,
                     FrameSink* sink = nullptr);

// FNV-1a digests used for pass-identity checks.
uint64_t fnv1a64(const void* data, size_t size, uint64_t seed = 0xcbf29ce484222325ull);
uint64_t depthmap_digest(const DepthMap& map, uint64_t seed);
uint64_t tree_digest(const PartitionTree& tree, uint64_t seed);

}  // namespace qtl

#endif  // QTL_DRIVER_H_
