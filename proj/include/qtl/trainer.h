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

#ifndef QTL_TRAINER_H_
#define QTL_TRAINER_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qtl/frame.h"
#include "qtl/neighborhood.h"
#include "qtl/rdo.h"

namespace qtl {

// One observed square block of depth 0..3 from a fully searched
// high-resolution frame: its own split decision plus the co-located
// neighborhood averages for every candidate margin.
struct CalibrationSample {
  uint8_t depth = 0;
  uint8_t x1 = 0;  // 1 iff the block was 4-way split
  std::vector<double> x2_by_margin;  // aligned with TrainingSet::margins
};

struct TrainingSet {
  // Candidate margins per depth. Depths 0..2 use the margin grid; depth 3
  // is pinned to a single margin of 0.
  std::array<std::vector<int>, 4> margins;
  std::array<std::vector<CalibrationSample>, 4> samples;

  int64_t total_samples() const;
};

struct ErrorStats {
  int64_t type1 = 0;  // predicted split, observed non-split
  int64_t type2 = 0;  // predicted non-split, observed split
  int64_t total = 0;
};

// Denominator used when turning error counts into rates: the whole sample
// pool at the depth, or only the samples with the matching observed class.
enum class RateDenominator { kJoint, kConditional };

struct TrainerOptions {
  double epsilon = 0.1;  // type II error rate budget, in (0,1)
  int min_samples = 50;  // depths with fewer samples stay disabled
  RateDenominator denominator = RateDenominator::kJoint;
};

struct DepthRule {
  int margin = 0;
  double tau = 0.0;
  bool enabled = false;
  double type1_rate = 0.0;
  double type2_rate = 0.0;
  int64_t sample_count = 0;
};

struct InferenceModel {
  double epsilon = 0.1;
  RateDenominator denominator = RateDenominator::kJoint;
  std::array<DepthRule, 4> rule;
};

// Decision thresholds searched during calibration: multiples of 0.1 in [0,1].
std::vector<double> tau_grid();

// Walks fully searched high-resolution trees, pairing every square block of
// depth 0..3 in the chosen trees with its neighborhood averages from the
// co-located low-resolution depth map. One tree vector and one map per
// frame; dims are the unpadded target dimensions of each rung.
// Depth-3 blocks whose margin-0 region falls outside the low-resolution
// frame are skipped. Throws std::invalid_argument on frame-count mismatch.
TrainingSet collect_samples(
    const std::vector<std::vector<PartitionTree>>& hi_trees_per_frame,
    const std::vector<DepthMap>& lo_maps, Dims hi_dims, Dims lo_dims,
    const std::vector<int>& margin_grid = default_margin_grid());

// Error counts of the rule "predict non-split iff x2 < tau" at one margin
// (an index into TrainingSet::margins for the samples' depth).
ErrorStats evaluate_errors(const std::vector<CalibrationSample>& samples,
                           int margin_index, double tau);

// Grid-searches (margin, tau) per depth. Depths 0..2 pick, per margin, the
// largest tau whose type II rate stays within epsilon, then the margin with
// the smallest type I rate; depth 3 uses margin 0 and the tau minimizing the
// total error count. Ties prefer the smaller margin / smaller tau. Depths
// under min_samples are left disabled. Throws CalibrationError when no depth
// has samples.
InferenceModel calibrate(const TrainingSet& set, const TrainerOptions& opts);

// Human-readable key-value persistence; see README for the field list.
void save_model(const InferenceModel& model, const std::string& path);
InferenceModel load_model(const std::string& path);

std::string model_to_string(const InferenceModel& model);
InferenceModel model_from_string(const std::string& text);

}  // namespace qtl

#endif  // QTL_TRAINER_H_
