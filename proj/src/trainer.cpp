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

#include "qtl/trainer.h"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qtl/error.h"

namespace qtl {

std::vector<double> tau_grid() {
  std::vector<double> taus(11);
  for (int i = 0; i <= 10; ++i) taus[i] = i / 10.0;
  return taus;
}

int64_t TrainingSet::total_samples() const {
  int64_t n = 0;
  for (const auto& bucket : samples) n += static_cast<int64_t>(bucket.size());
  return n;
}

namespace {

void collect_from_tree(const PartitionTree& node, const DepthMapIndex& index,
                       Dims hi_dims, Dims lo_dims, TrainingSet& set) {
  const int depth = block_depth(node.rect);
  if (depth > 3) return;  // 4x4 blocks cannot split; nothing to predict

  CalibrationSample sample;
  sample.depth = static_cast<uint8_t>(depth);
  sample.x1 = node.mode == PartitionMode::kSplit4 ? 1 : 0;
  const RealRect region = colocate(node.rect, hi_dims, lo_dims);

  bool usable = true;
  const std::vector<int>& margins = set.margins[depth];
  sample.x2_by_margin.reserve(margins.size());
  for (int margin : margins) {
    std::optional<double> v = index.try_mean(region, {margin, depth});
    if (!v) {
      // Only reachable at depth 3 (margin 0) for blocks wholly inside the
      // padded band; there is no co-located data to learn from.
      usable = false;
      break;
    }
    sample.x2_by_margin.push_back(*v);
  }
  if (usable) set.samples[depth].push_back(std::move(sample));

  if (node.mode == PartitionMode::kSplit4)
    for (const PartitionTree& child : node.children)
      collect_from_tree(child, index, hi_dims, lo_dims, set);
}

}  // namespace

TrainingSet collect_samples(
    const std::vector<std::vector<PartitionTree>>& hi_trees_per_frame,
    const std::vector<DepthMap>& lo_maps, Dims hi_dims, Dims lo_dims,
    const std::vector<int>& margin_grid) {
  if (hi_trees_per_frame.size() != lo_maps.size())
    throw std::invalid_argument(
        "collect_samples: frame count mismatch between passes");
  if (margin_grid.empty())
    throw std::invalid_argument("collect_samples: empty margin grid");

  TrainingSet set;
  set.margins = {margin_grid, margin_grid, margin_grid, std::vector<int>{0}};
  for (size_t f = 0; f < hi_trees_per_frame.size(); ++f) {
    const DepthMapIndex index(lo_maps[f]);
    for (const PartitionTree& tree : hi_trees_per_frame[f])
      collect_from_tree(tree, index, hi_dims, lo_dims, set);
  }
  return set;
}

ErrorStats evaluate_errors(const std::vector<CalibrationSample>& samples,
                           int margin_index, double tau) {
  ErrorStats st;
  st.total = static_cast<int64_t>(samples.size());
  for (const CalibrationSample& s : samples) {
    const bool predict_split = !(s.x2_by_margin[margin_index] < tau);
    if (predict_split && s.x1 == 0) ++st.type1;
    if (!predict_split && s.x1 == 1) ++st.type2;
  }
  return st;
}

namespace {

struct Rates {
  double type1 = 0.0;
  double type2 = 0.0;
};

Rates to_rates(const ErrorStats& st, int64_t n_split, int64_t n_nonsplit,
               RateDenominator denom) {
  Rates r;
  if (denom == RateDenominator::kJoint) {
    if (st.total > 0) {
      r.type1 = static_cast<double>(st.type1) / static_cast<double>(st.total);
      r.type2 = static_cast<double>(st.type2) / static_cast<double>(st.total);
    }
  } else {
    if (n_nonsplit > 0)
      r.type1 = static_cast<double>(st.type1) / static_cast<double>(n_nonsplit);
    if (n_split > 0)
      r.type2 = static_cast<double>(st.type2) / static_cast<double>(n_split);
  }
  return r;
}

}  // namespace

InferenceModel calibrate(const TrainingSet& set, const TrainerOptions& opts) {
  if (!(opts.epsilon > 0.0 && opts.epsilon < 1.0))
    throw std::invalid_argument("calibrate: epsilon must be in (0,1)");
  if (set.total_samples() == 0)
    throw CalibrationError("calibrate: no samples at any depth");

  InferenceModel model;
  model.epsilon = opts.epsilon;
  model.denominator = opts.denominator;
  const std::vector<double> taus = tau_grid();

  for (int d = 0; d < 4; ++d) {
    DepthRule& rule = model.rule[d];
    const std::vector<CalibrationSample>& samples = set.samples[d];
    rule.sample_count = static_cast<int64_t>(samples.size());
    if (samples.empty()) continue;  // stays disabled

    int64_t n_split = 0;
    for (const CalibrationSample& s : samples) n_split += s.x1;
    const int64_t n_nonsplit = rule.sample_count - n_split;
    const std::vector<int>& margins = set.margins[d];

    if (d <= 2) {
      // Per margin, the largest threshold whose type II rate fits the
      // budget; across margins, the smallest resulting type I rate.
      double best_type1 = std::numeric_limits<double>::infinity();
      for (size_t mi = 0; mi < margins.size(); ++mi) {
        double chosen_tau = 0.0;
        ErrorStats chosen{};
        for (size_t ti = taus.size(); ti-- > 0;) {
          ErrorStats st = evaluate_errors(samples, static_cast<int>(mi), taus[ti]);
          if (to_rates(st, n_split, n_nonsplit, opts.denominator).type2 <=
              opts.epsilon) {
            chosen_tau = taus[ti];
            chosen = st;
            break;
          }
        }
        Rates r = to_rates(chosen, n_split, n_nonsplit, opts.denominator);
        if (r.type1 < best_type1) {
          best_type1 = r.type1;
          rule.margin = margins[mi];
          rule.tau = chosen_tau;
          rule.type1_rate = r.type1;
          rule.type2_rate = r.type2;
        }
      }
    } else {
      // Smallest blocks: margin pinned to 0, threshold minimizes the total
      // number of errors of both kinds.
      int64_t best_total = std::numeric_limits<int64_t>::max();
      for (double tau : taus) {
        ErrorStats st = evaluate_errors(samples, 0, tau);
        if (st.type1 + st.type2 < best_total) {
          best_total = st.type1 + st.type2;
          Rates r = to_rates(st, n_split, n_nonsplit, opts.denominator);
          rule.margin = margins[0];
          rule.tau = tau;
          rule.type1_rate = r.type1;
          rule.type2_rate = r.type2;
        }
      }
    }
    rule.enabled = rule.sample_count >= opts.min_samples;
  }
  return model;
}

namespace {

const char* denom_name(RateDenominator d) {
  return d == RateDenominator::kJoint ? "joint" : "conditional";
}

}  // namespace

std::string model_to_string(const InferenceModel& model) {
  std::ostringstream out;
  char buf[64];
  out << "qtl-model 1\n";
  std::snprintf(buf, sizeof buf, "%.17g", model.epsilon);
  out << "epsilon " << buf << "\n";
  out << "denominator " << denom_name(model.denominator) << "\n";
  for (int d = 0; d < 4; ++d) {
    const DepthRule& r = model.rule[d];
    out << "depth " << d << " margin " << r.margin;
    std::snprintf(buf, sizeof buf, "%.17g", r.tau);
    out << " tau " << buf;
    out << " enabled " << (r.enabled ? 1 : 0);
    std::snprintf(buf, sizeof buf, "%.17g", r.type1_rate);
    out << " type1_rate " << buf;
    std::snprintf(buf, sizeof buf, "%.17g", r.type2_rate);
    out << " type2_rate " << buf;
    out << " samples " << r.sample_count << "\n";
  }
  return out.str();
}

InferenceModel model_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "qtl-model" || version != 1)
    throw ParseError("model: missing qtl-model header");

  InferenceModel model;
  bool seen_depth[4] = {false, false, false, false};
  while (in >> word) {
    if (word == "epsilon") {
      if (!(in >> model.epsilon)) throw ParseError("model: bad epsilon");
    } else if (word == "denominator") {
      std::string v;
      in >> v;
      if (v == "joint")
        model.denominator = RateDenominator::kJoint;
      else if (v == "conditional")
        model.denominator = RateDenominator::kConditional;
      else
        throw ParseError("model: bad denominator '" + v + "'");
    } else if (word == "depth") {
      int d = -1;
      if (!(in >> d) || d < 0 || d > 3)
        throw ParseError("model: bad depth index");
      DepthRule& r = model.rule[d];
      std::string key;
      int enabled = 0;
      if (!(in >> key >> r.margin) || key != "margin")
        throw ParseError("model: expected margin");
      if (!(in >> key >> r.tau) || key != "tau")
        throw ParseError("model: expected tau");
      if (!(in >> key >> enabled) || key != "enabled")
        throw ParseError("model: expected enabled");
      r.enabled = enabled != 0;
      if (!(in >> key >> r.type1_rate) || key != "type1_rate")
        throw ParseError("model: expected type1_rate");
      if (!(in >> key >> r.type2_rate) || key != "type2_rate")
        throw ParseError("model: expected type2_rate");
      if (!(in >> key >> r.sample_count) || key != "samples")
        throw ParseError("model: expected samples");
      seen_depth[d] = true;
    } else {
      throw ParseError("model: unknown key '" + word + "'");
    }
  }
  for (int d = 0; d < 4; ++d)
    if (!seen_depth[d]) throw ParseError("model: missing depth rules");
  return model;
}

void save_model(const InferenceModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << model_to_string(model);
  if (!out) throw ParseError(path + ": write failed");
}

InferenceModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream body;
  body << in.rdbuf();
  return model_from_string(body.str());
}

}  // namespace qtl
