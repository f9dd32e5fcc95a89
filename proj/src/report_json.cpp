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

#include "qtl/report_json.h"

#include <sstream>

#include "qtl/metrics.h"

namespace qtl {

namespace {

using nlohmann::json;

json pass_to_json(const PassReport& pass) {
  json frames_nodes = json::array();
  json frames_cost = json::array();
  for (const FramePassStats& f : pass.frames) {
    frames_nodes.push_back(f.nodes);
    frames_cost.push_back(f.cost);
  }
  return json{{"nodes", pass.nodes},
              {"rd_cost", pass.cost},
              {"wall_ms", pass.wall_ms},
              {"per_frame_nodes", std::move(frames_nodes)},
              {"per_frame_cost", std::move(frames_cost)}};
}

std::string hex64(uint64_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

}  // namespace

json model_to_json(const InferenceModel& model) {
  json rules = json::array();
  for (int d = 0; d < 4; ++d) {
    const DepthRule& r = model.rule[d];
    rules.push_back(json{{"depth", d},
                         {"margin", r.margin},
                         {"tau", r.tau},
                         {"enabled", r.enabled},
                         {"type1_rate", r.type1_rate},
                         {"type2_rate", r.type2_rate},
                         {"samples", r.sample_count}});
  }
  return json{{"epsilon", model.epsilon},
              {"denominator", model.denominator == RateDenominator::kJoint
                                  ? "joint"
                                  : "conditional"},
              {"rules", std::move(rules)}};
}

json report_to_json(const RunReport& run) {
  json per_qp = json::array();
  bool all_have_reference = !run.per_qp.empty();
  for (const QpReport& q : run.per_qp) {
    json entry{{"qp", q.qp},
               {"accelerated", pass_to_json(q.accelerated)},
               {"low_res", pass_to_json(q.low_res)},
               {"termination_fires",
                json{{"depth0", q.termination_fires[0]},
                     {"depth1", q.termination_fires[1]},
                     {"depth2", q.termination_fires[2]},
                     {"depth3", q.termination_fires[3]}}},
               {"lo_digest", hex64(q.lo_digest)}};
    json groups = json::array();
    for (const GroupCalibration& g : q.groups) {
      groups.push_back(json{{"first_frame", g.first_frame},
                            {"frames", g.frames},
                            {"train_frames", g.train_frames},
                            {"model", model_to_json(g.model)}});
    }
    entry["groups"] = std::move(groups);
    if (q.has_reference) {
      entry["reference"] = pass_to_json(q.reference);
      entry["lo_digest_standalone"] = hex64(q.lo_digest_standalone);
      const double nodes_delta =
          (static_cast<double>(q.accelerated.nodes) -
           static_cast<double>(q.reference.nodes)) /
          static_cast<double>(q.reference.nodes);
      const double cost_delta =
          (q.accelerated.cost - q.reference.cost) / q.reference.cost;
      entry["delta_t_proxy"] = nodes_delta;
      entry["delta_cost"] = cost_delta;
    } else {
      all_have_reference = false;
    }
    per_qp.push_back(std::move(entry));
  }

  json out{{"input", run.input},
           {"hi", json{{"width", run.hi.w}, {"height", run.hi.h}}},
           {"lo", json{{"width", run.lo.w}, {"height", run.lo.h}}},
           {"epsilon", run.epsilon},
           {"group_size", run.schedule.group_size},
           {"train_count", run.schedule.train_count},
           {"per_qp", std::move(per_qp)}};
  if (all_have_reference) {
    const RunSummary s = summarize(run);
    out["aggregate"] =
        json{{"delta_t_proxy", s.delta_t_proxy}, {"delta_cost", s.delta_cost}};
  }
  return out;
}

}  // namespace qtl
