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

#ifndef QTL_METRICS_H_
#define QTL_METRICS_H_

#include <string>
#include <vector>

#include "qtl/driver.h"

namespace qtl {

struct RdPoint {
  double rate = 0.0;  // kbit/s, > 0
  double psnr = 0.0;  // dB
};

using RdCurve = std::vector<RdPoint>;

// Bjontegaard delta-rate in percent: cubic fit of log-rate over PSNR per
// curve, averaged difference over the overlapping PSNR interval,
// 100 * (exp(mean difference) - 1). Curves need >= 4 points with distinct
// rates; non-overlapping PSNR ranges throw std::domain_error.
double bd_rate(const RdCurve& reference, const RdCurve& test);

// Bjontegaard delta-PSNR in dB, axes exchanged.
double bd_psnr(const RdCurve& reference, const RdCurve& test);

// CSV with columns rate,psnr; '#' comments and a header line are skipped.
RdCurve read_rd_csv(const std::string& path);

struct QpSummary {
  int qp = 0;
  uint64_t accel_nodes = 0;
  uint64_t ref_nodes = 0;
  double accel_cost = 0.0;
  double ref_cost = 0.0;
  double delta_t_proxy = 0.0;  // (accel - ref) / ref node counts
  double delta_cost = 0.0;     // (accel - ref) / ref total rd cost
};

struct RunSummary {
  std::vector<QpSummary> per_qp;
  // Aggregated as total counts/costs over all QPs.
  double delta_t_proxy = 0.0;
  double delta_cost = 0.0;
};

// Node-count and RD-cost deltas of a ladder run against its reference pass.
// Throws std::invalid_argument when the run has no reference pass.
RunSummary summarize(const RunReport& run);

}  // namespace qtl

#endif  // QTL_METRICS_H_
