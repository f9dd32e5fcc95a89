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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "qtl/error.h"
#include "qtl/rdo.h"
#include "qtl/scale.h"
#include "qtl/trainer.h"
#include "support/oracles.h"
#include "support/synthetic_samples.h"
#include "support/test_util.h"

using namespace qtl;

namespace {

bool rules_equal(const InferenceModel& a, const InferenceModel& b) {
  for (int d = 0; d < 4; ++d) {
    const DepthRule& x = a.rule[d];
    const DepthRule& y = b.rule[d];
    if (x.margin != y.margin || x.tau != y.tau || x.enabled != y.enabled ||
        x.type1_rate != y.type1_rate || x.type2_rate != y.type2_rate ||
        x.sample_count != y.sample_count)
      return false;
  }
  return true;
}

int count_split4_at_depth(const PartitionTree& t, int depth) {
  int n = 0;
  if (t.rect.is_square() && block_depth(t.rect) == depth &&
      t.mode == PartitionMode::kSplit4)
    ++n;
  for (const auto& c : t.children) n += count_split4_at_depth(c, depth);
  return n;
}

}  // namespace

TEST_CASE("collect_samples emits one sample per square block of the trees") {
  const Dims hi{1280, 720};
  const Dims lo{960, 540};
  const FrameBuffer hi_frame = pad_to_superblocks(FrameBuffer(hi.w, hi.h, 90));
  const FrameBuffer lo_frame = pad_to_superblocks(FrameBuffer(lo.w, lo.h, 90));
  REQUIRE(hi_frame.height == 768);

  const RdoConfig cfg = make_rdo_config(27);
  const FrameSearchResult hi_res = search_frame(hi_frame, cfg, null_terminator(), 4);
  const FrameSearchResult lo_res = search_frame(lo_frame, cfg, null_terminator(), 4);
  const DepthMap lo_map =
      depthmap_from_trees(lo_res.trees, lo_frame.width, lo_frame.height);

  const TrainingSet set =
      collect_samples({hi_res.trees}, {lo_map}, hi, lo);

  // Flat content: the trees are all roots, one depth-0 sample per superblock.
  CHECK(set.samples[0].size() == 240);  // 20 x 12 superblocks
  CHECK(set.samples[1].empty());
  for (const CalibrationSample& s : set.samples[0]) {
    CHECK(s.x1 == 0);
    CHECK(s.x2_by_margin.size() == default_margin_grid().size());
    for (double v : s.x2_by_margin) CHECK(v == 0.0);
  }

  SUBCASE("frame count mismatch is rejected") {
    CHECK_THROWS_AS(collect_samples({hi_res.trees}, {lo_map, lo_map}, hi, lo),
                    std::invalid_argument);
  }
}

TEST_CASE("collect_samples respects quadtree arithmetic on detailed content") {
  const Dims dims{448, 256};
  const FrameBuffer frame = testutil::structured_frame(dims.w, dims.h, 31);
  const RdoConfig cfg = make_rdo_config(27);
  const FrameSearchResult res = search_frame(frame, cfg, null_terminator(), 4);
  const DepthMap map = depthmap_from_trees(res.trees, dims.w, dims.h);

  const TrainingSet set = collect_samples({res.trees}, {map}, dims, dims);

  CHECK(set.samples[0].size() == res.trees.size());
  for (int d = 0; d + 1 <= 3; ++d) {
    int64_t splits = 0;
    for (const PartitionTree& t : res.trees)
      splits += count_split4_at_depth(t, d);
    CHECK(static_cast<int64_t>(set.samples[d + 1].size()) == 4 * splits);
  }
  // Make the content actually produced a spread of depths.
  CHECK(set.samples[1].size() > 0);
  CHECK(set.samples[2].size() > 0);
}

TEST_CASE("calibrate trivial sample sets") {
  const std::vector<int> grid = default_margin_grid();
  TrainingSet set;
  set.margins = {grid, grid, grid, std::vector<int>{0}};
  TrainerOptions opts;
  opts.epsilon = 0.1;
  opts.min_samples = 10;

  SUBCASE("never-split samples select tau 1.0") {
    for (int i = 0; i < 60; ++i) {
      CalibrationSample s;
      s.depth = 0;
      s.x1 = 0;
      s.x2_by_margin.assign(grid.size(), 0.25);
      set.samples[0].push_back(s);
    }
    const InferenceModel model = calibrate(set, opts);
    CHECK(model.rule[0].enabled);
    CHECK(model.rule[0].tau == 1.0);
    CHECK(model.rule[0].margin == 8);  // ties break to the smallest margin
    CHECK(model.rule[0].type1_rate == 0.0);
    CHECK(model.rule[0].type2_rate == 0.0);
    CHECK_FALSE(model.rule[1].enabled);
  }
  SUBCASE("always-split samples at x2=1.0 keep tau 1.0 with zero errors") {
    for (int i = 0; i < 60; ++i) {
      CalibrationSample s;
      s.depth = 1;
      s.x1 = 1;
      s.x2_by_margin.assign(grid.size(), 1.0);
      set.samples[1].push_back(s);
    }
    const InferenceModel model = calibrate(set, opts);
    CHECK(model.rule[1].tau == 1.0);
    CHECK(model.rule[1].type1_rate == 0.0);
    CHECK(model.rule[1].type2_rate == 0.0);
  }
  SUBCASE("no samples at any depth is an error") {
    CHECK_THROWS_AS(calibrate(set, opts), CalibrationError);
  }
  SUBCASE("bad epsilon is rejected") {
    set.samples[0].push_back(
        {0, 0, std::vector<double>(grid.size(), 0.0)});
    opts.epsilon = 0.0;
    CHECK_THROWS_AS(calibrate(set, opts), std::invalid_argument);
    opts.epsilon = 1.0;
    CHECK_THROWS_AS(calibrate(set, opts), std::invalid_argument);
  }
}

TEST_CASE("evaluate_errors counts the confusion cells") {
  std::vector<CalibrationSample> samples;
  // (x1, x2) hand-picked pairs.
  const double xs[6] = {0.0, 0.05, 0.3, 0.3, 0.9, 1.0};
  const uint8_t x1[6] = {0, 1, 0, 1, 0, 1};
  for (int i = 0; i < 6; ++i)
    samples.push_back({0, x1[i], std::vector<double>{xs[i]}});

  SUBCASE("tau 0 predicts split everywhere") {
    const ErrorStats st = evaluate_errors(samples, 0, 0.0);
    CHECK(st.type2 == 0);
    CHECK(st.type1 == 3);  // every observed non-split
    CHECK(st.total == 6);
  }
  SUBCASE("tau 1.0 only flags x2 == 1.0 as split") {
    const ErrorStats st = evaluate_errors(samples, 0, 1.0);
    CHECK(st.type1 == 0);   // non-splits all have x2 < 1
    CHECK(st.type2 == 2);   // the split samples below 1.0
  }
  SUBCASE("hand enumeration at tau 0.3") {
    // predict non-split iff x2 < 0.3: samples 0,1 predicted non-split.
    const ErrorStats st = evaluate_errors(samples, 0, 0.3);
    CHECK(st.type2 == 1);  // (x1=1, x2=0.05)
    CHECK(st.type1 == 2);  // (x1=0, x2=0.3), (x1=0, x2=0.9)
    CHECK(st.type1 + st.type2 <= st.total);
  }
}

TEST_CASE("calibrate equals the exhaustive grid oracle on random sets") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    const TrainingSet set = testutil::random_training_set(seed);
    TrainerOptions opts;
    opts.epsilon = seed % 2 ? 0.1 : 0.2;
    opts.min_samples = 50;
    opts.denominator = seed % 3 == 0 ? RateDenominator::kConditional
                                     : RateDenominator::kJoint;
    const InferenceModel got = calibrate(set, opts);
    const InferenceModel want = oracle::calibrate(set, opts);
    CHECK(rules_equal(got, want));
  }
}

TEST_CASE("calibrate invariants") {
  SUBCASE("type II rate within budget at enabled depths 0-2") {
    for (uint64_t seed = 40; seed < 60; ++seed) {
      const TrainingSet set = testutil::random_training_set(seed);
      TrainerOptions opts;
      opts.epsilon = 0.15;
      const InferenceModel model = calibrate(set, opts);
      for (int d = 0; d <= 2; ++d)
        if (model.rule[d].enabled)
          CHECK(model.rule[d].type2_rate <= opts.epsilon);
    }
  }
  SUBCASE("sample order does not matter") {
    TrainingSet set = testutil::random_training_set(7);
    TrainerOptions opts;
    const InferenceModel before = calibrate(set, opts);
    std::mt19937 shuffler(99);
    for (auto& bucket : set.samples)
      std::shuffle(bucket.begin(), bucket.end(), shuffler);
    CHECK(rules_equal(before, calibrate(set, opts)));
  }
  SUBCASE("tau is monotone in epsilon for a fixed margin") {
    TrainingSet set = testutil::random_training_set(13);
    // Pin a single margin so the comparison is per-margin.
    for (int d = 0; d < 3; ++d) {
      set.margins[d] = {8};
      for (auto& s : set.samples[d]) s.x2_by_margin.resize(1);
    }
    TrainerOptions lo_opts, hi_opts;
    lo_opts.epsilon = 0.05;
    hi_opts.epsilon = 0.3;
    const InferenceModel lo = calibrate(set, lo_opts);
    const InferenceModel hi = calibrate(set, hi_opts);
    for (int d = 0; d <= 2; ++d) CHECK(hi.rule[d].tau >= lo.rule[d].tau);
  }
  SUBCASE("an always-split zero-mean sample can only lower tau") {
    TrainingSet set = testutil::random_training_set(17);
    for (int d = 0; d < 3; ++d) {
      set.margins[d] = {8};
      for (auto& s : set.samples[d]) s.x2_by_margin.resize(1);
    }
    TrainerOptions opts;
    const InferenceModel before = calibrate(set, opts);
    for (int d = 0; d < 3; ++d)
      set.samples[d].push_back({static_cast<uint8_t>(d), 1,
                                std::vector<double>{0.0}});
    const InferenceModel after = calibrate(set, opts);
    for (int d = 0; d <= 2; ++d) CHECK(after.rule[d].tau <= before.rule[d].tau);
  }
  SUBCASE("depths under the sample floor stay disabled") {
    TrainingSet set = testutil::random_training_set(23);
    TrainerOptions opts;
    opts.min_samples = 10000;
    const InferenceModel model = calibrate(set, opts);
    for (int d = 0; d < 4; ++d) CHECK_FALSE(model.rule[d].enabled);
  }
}

TEST_CASE("model text round trip") {
  const TrainingSet set = testutil::random_training_set(3);
  TrainerOptions opts;
  opts.epsilon = 0.2;
  opts.denominator = RateDenominator::kConditional;
  const InferenceModel model = calibrate(set, opts);

  testutil::TempDir dir("model");
  const std::string path = dir.file("m.txt");
  save_model(model, path);
  const InferenceModel loaded = load_model(path);
  CHECK(loaded.epsilon == model.epsilon);
  CHECK(loaded.denominator == model.denominator);
  CHECK(rules_equal(model, loaded));

  SUBCASE("parse failures") {
    CHECK_THROWS_AS(model_from_string("nonsense"), ParseError);
    CHECK_THROWS_AS(model_from_string("qtl-model 1\nepsilon 0.1\n"),
                    ParseError);  // missing depth rules
  }
}
