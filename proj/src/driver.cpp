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

#include "qtl/driver.h"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <stdexcept>

#include "qtl/scale.h"
#include "qtl/y4m.h"

namespace qtl {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

void validate_schedule(const GroupSchedule& sched) {
  if (sched.group_size <= 0 || sched.train_count <= 0 ||
      sched.train_count > sched.group_size)
    throw std::invalid_argument(
        "GroupSchedule: need 0 < train_count <= group_size");
}

}  // namespace

ModelTerminator::ModelTerminator(const InferenceModel& model,
                                 const DepthMapIndex& lo_index, Dims hi_dims,
                                 Dims lo_dims)
    : model_(model), lo_index_(lo_index), hi_dims_(hi_dims), lo_dims_(lo_dims) {}

bool ModelTerminator::should_terminate(const BlockRect& rect) const {
  const int d = block_depth(rect);
  if (d > 3) return false;
  const DepthRule& rule = model_.rule[d];
  if (!rule.enabled) return false;

  const RealRect region = colocate(rect, hi_dims_, lo_dims_);
  const std::optional<double> x2 =
      lo_index_.try_mean(region, {rule.margin, d});
  if (!x2) return false;  // block maps wholly outside the co-located frame
  if (*x2 < rule.tau) {
    fires_[d].fetch_add(1, std::memory_order_relaxed);
    return true;
  }
  return false;
}

std::array<uint64_t, 4> ModelTerminator::fires() const {
  return {fires_[0].load(), fires_[1].load(), fires_[2].load(),
          fires_[3].load()};
}

GroupResult encode_group(const std::vector<FrameBuffer>& hi_frames,
                         const std::vector<FrameBuffer>& lo_frames,
                         Dims hi_dims, Dims lo_dims, const EncodeOptions& opts,
                         int first_frame_index, FrameSink* sink) {
  if (hi_frames.size() != lo_frames.size())
    throw std::invalid_argument("encode_group: stream length mismatch");
  if (hi_frames.empty())
    throw std::invalid_argument("encode_group: empty group");
  validate_schedule(opts.schedule);

  const int n = static_cast<int>(hi_frames.size());
  const int train = std::min(opts.schedule.train_count, n);

  GroupResult res;
  res.train_frames = train;

  // Low-resolution pass: full search on every frame of the group.
  std::vector<DepthMap> lo_maps;
  lo_maps.reserve(n);
  for (int k = 0; k < n; ++k) {
    auto t0 = std::chrono::steady_clock::now();
    FrameSearchResult r =
        search_frame(lo_frames[k], opts.rdo, null_terminator(), opts.threads);
    res.lo_wall_ms += ms_since(t0);
    res.lo_stats.push_back({r.nodes, r.cost});
    DepthMap map = depthmap_from_trees(r.trees, lo_frames[k].width,
                                       lo_frames[k].height);
    if (sink) sink->on_lo_frame(first_frame_index + k, r.trees, map);
    lo_maps.push_back(std::move(map));
  }

  // Training frames run the plain full search at high resolution.
  std::vector<std::vector<PartitionTree>> train_trees;
  train_trees.reserve(train);
  for (int k = 0; k < train; ++k) {
    auto t0 = std::chrono::steady_clock::now();
    FrameSearchResult r =
        search_frame(hi_frames[k], opts.rdo, null_terminator(), opts.threads);
    res.hi_wall_ms += ms_since(t0);
    res.hi_stats.push_back({r.nodes, r.cost});
    if (sink) sink->on_hi_frame(first_frame_index + k, r.trees, false);
    train_trees.push_back(std::move(r.trees));
  }

  const std::vector<DepthMap> train_maps(lo_maps.begin(),
                                         lo_maps.begin() + train);
  TrainingSet set = collect_samples(train_trees, train_maps, hi_dims, lo_dims,
                                    opts.margin_grid);
  res.model = calibrate(set, opts.trainer);
  if (opts.force_tau_zero)
    for (DepthRule& rule : res.model.rule) rule.tau = 0.0;

  // Remaining frames run with the freshly calibrated split gate.
  for (int k = train; k < n; ++k) {
    const DepthMapIndex index(lo_maps[k]);
    const ModelTerminator term(res.model, index, hi_dims, lo_dims);
    auto t0 = std::chrono::steady_clock::now();
    FrameSearchResult r = search_frame(hi_frames[k], opts.rdo, term, opts.threads);
    res.hi_wall_ms += ms_since(t0);
    res.hi_stats.push_back({r.nodes, r.cost});
    if (sink) sink->on_hi_frame(first_frame_index + k, r.trees, true);
    const std::array<uint64_t, 4> fires = term.fires();
    for (int d = 0; d < 4; ++d) res.termination_fires[d] += fires[d];
  }
  return res;
}

namespace {

// Forwards to the user sink while folding the low-resolution depth maps into
// a running digest.
class DigestSink final : public FrameSink {
 public:
  DigestSink(FrameSink* user, uint64_t* digest) : user_(user), digest_(digest) {}

  void on_lo_frame(int frame_index, const std::vector<PartitionTree>& trees,
                   const DepthMap& map) override {
    *digest_ = depthmap_digest(map, *digest_);
    if (user_) user_->on_lo_frame(frame_index, trees, map);
  }
  void on_hi_frame(int frame_index, const std::vector<PartitionTree>& trees,
                   bool accelerated) override {
    if (user_) user_->on_hi_frame(frame_index, trees, accelerated);
  }

 private:
  FrameSink* user_;
  uint64_t* digest_;
};

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;

}  // namespace

RunReport run_ladder(const std::string& y4m_path, const LadderConfig& cfg,
                     FrameSink* sink) {
  if (cfg.hi.w <= 0 || cfg.hi.h <= 0 || cfg.lo.w <= 0 || cfg.lo.h <= 0)
    throw std::invalid_argument("run_ladder: invalid target dimensions");
  validate_schedule(cfg.schedule);
  if (cfg.qps.empty())
    throw std::invalid_argument("run_ladder: no QPs configured");

  RunReport report;
  report.input = y4m_path;
  report.hi = cfg.hi;
  report.lo = cfg.lo;
  report.epsilon = cfg.trainer.epsilon;
  report.schedule = cfg.schedule;

  for (int qp : cfg.qps) {
    QpReport qrep;
    qrep.qp = qp;
    qrep.lo_digest = kFnvOffset;
    qrep.lo_digest_standalone = kFnvOffset;

    EncodeOptions opts;
    opts.rdo = make_rdo_config(qp, cfg.split_bits, cfg.header_bits);
    opts.schedule = cfg.schedule;
    opts.trainer = cfg.trainer;
    opts.margin_grid = cfg.margin_grid;
    opts.threads = cfg.threads;
    opts.force_tau_zero = cfg.force_tau_zero;

    Y4mReader reader(y4m_path);
    std::vector<FrameBuffer> hi_group, lo_group;
    hi_group.reserve(cfg.schedule.group_size);
    lo_group.reserve(cfg.schedule.group_size);
    int next_frame = 0;

    auto flush_group = [&] {
      if (hi_group.empty()) return;
      const int first = next_frame - static_cast<int>(hi_group.size());
      DigestSink digest_sink(sink, &qrep.lo_digest);
      GroupResult g = encode_group(hi_group, lo_group, cfg.hi, cfg.lo, opts,
                                   first, &digest_sink);

      GroupCalibration cal;
      cal.first_frame = first;
      cal.frames = static_cast<int>(hi_group.size());
      cal.train_frames = g.train_frames;
      cal.model = g.model;
      qrep.groups.push_back(std::move(cal));

      for (const FramePassStats& s : g.hi_stats) {
        qrep.accelerated.frames.push_back(s);
        qrep.accelerated.nodes += s.nodes;
        qrep.accelerated.cost += s.cost;
      }
      for (const FramePassStats& s : g.lo_stats) {
        qrep.low_res.frames.push_back(s);
        qrep.low_res.nodes += s.nodes;
        qrep.low_res.cost += s.cost;
      }
      qrep.accelerated.wall_ms += g.hi_wall_ms;
      qrep.low_res.wall_ms += g.lo_wall_ms;
      for (int d = 0; d < 4; ++d)
        qrep.termination_fires[d] += g.termination_fires[d];

      if (cfg.with_reference) {
        qrep.has_reference = true;
        for (size_t k = 0; k < hi_group.size(); ++k) {
          auto t0 = std::chrono::steady_clock::now();
          FrameSearchResult r = search_frame(hi_group[k], opts.rdo,
                                             null_terminator(), opts.threads);
          qrep.reference.wall_ms += ms_since(t0);
          qrep.reference.frames.push_back({r.nodes, r.cost});
          qrep.reference.nodes += r.nodes;
          qrep.reference.cost += r.cost;
        }
        // Standalone low-resolution pass, for the byte-identity check.
        for (size_t k = 0; k < lo_group.size(); ++k) {
          FrameSearchResult r = search_frame(lo_group[k], opts.rdo,
                                             null_terminator(), opts.threads);
          DepthMap map = depthmap_from_trees(r.trees, lo_group[k].width,
                                             lo_group[k].height);
          qrep.lo_digest_standalone =
              depthmap_digest(map, qrep.lo_digest_standalone);
        }
      }
      hi_group.clear();
      lo_group.clear();
    };

    FrameBuffer native;
    while (reader.next(native)) {
      FrameBuffer hi = native.dims() == cfg.hi
                           ? native
                           : downscale(native, cfg.hi.w, cfg.hi.h);
      hi_group.push_back(pad_to_superblocks(hi));
      FrameBuffer lo = native.dims() == cfg.lo
                           ? std::move(native)
                           : downscale(native, cfg.lo.w, cfg.lo.h);
      lo_group.push_back(pad_to_superblocks(lo));
      ++next_frame;
      if (static_cast<int>(hi_group.size()) == cfg.schedule.group_size)
        flush_group();
    }
    flush_group();

    report.per_qp.push_back(std::move(qrep));
  }
  return report;
}

uint64_t fnv1a64(const void* data, size_t size, uint64_t seed) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t depthmap_digest(const DepthMap& map, uint64_t seed) {
  uint32_t dims[2] = {static_cast<uint32_t>(map.width),
                      static_cast<uint32_t>(map.height)};
  uint64_t h = fnv1a64(dims, sizeof dims, seed);
  return fnv1a64(map.depths.data(), map.depths.size(), h);
}

uint64_t tree_digest(const PartitionTree& tree, uint64_t seed) {
  struct {
    int32_t x, y, w, h;
    uint32_t mode;
    uint64_t cost_bits;
  } node{tree.rect.x, tree.rect.y, tree.rect.w, tree.rect.h,
         static_cast<uint32_t>(tree.mode), 0};
  static_assert(sizeof(double) == sizeof(uint64_t));
  std::memcpy(&node.cost_bits, &tree.cost, sizeof node.cost_bits);
  uint64_t h = fnv1a64(&node, sizeof node, seed);
  for (const PartitionTree& child : tree.children) h = tree_digest(child, h);
  return h;
}

}  // namespace qtl
