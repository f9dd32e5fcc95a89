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

#include "qtl/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qtl/error.h"

namespace qtl {

namespace {

// Cubic least-squares fit evaluated around the centroid of the abscissae for
// conditioning. With exactly four points this interpolates them.
struct CubicFit {
  double shift = 0.0;
  double c[4] = {0, 0, 0, 0};

  double integral(double a, double b) const {
    auto anti = [&](double x) {
      const double u = x - shift;
      return ((c[3] / 4 * u + c[2] / 3) * u + c[1] / 2) * u * u + c[0] * u;
    };
    return anti(b) - anti(a);
  }
};

CubicFit fit_cubic(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  CubicFit fit;
  for (double x : xs) fit.shift += x;
  fit.shift /= static_cast<double>(n);

  // Normal equations in long double, solved by Gauss elimination with
  // partial pivoting.
  long double ata[4][4] = {};
  long double atb[4] = {};
  for (size_t i = 0; i < n; ++i) {
    const long double u = xs[i] - fit.shift;
    long double pow_u[7] = {1, u, u * u, u * u * u, 0, 0, 0};
    pow_u[4] = pow_u[2] * pow_u[2];
    pow_u[5] = pow_u[2] * pow_u[3];
    pow_u[6] = pow_u[3] * pow_u[3];
    for (int r = 0; r < 4; ++r) {
      for (int cidx = 0; cidx < 4; ++cidx) ata[r][cidx] += pow_u[r + cidx];
      atb[r] += pow_u[r] * static_cast<long double>(ys[i]);
    }
  }

  int perm[4] = {0, 1, 2, 3};
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(static_cast<double>(ata[perm[r]][col])) >
          std::fabs(static_cast<double>(ata[perm[pivot]][col])))
        pivot = r;
    std::swap(perm[col], perm[pivot]);
    const long double diag = ata[perm[col]][col];
    if (diag == 0.0L)
      throw std::domain_error("bd metric: degenerate curve (singular fit)");
    for (int r = col + 1; r < 4; ++r) {
      const long double f = ata[perm[r]][col] / diag;
      for (int cidx = col; cidx < 4; ++cidx)
        ata[perm[r]][cidx] -= f * ata[perm[col]][cidx];
      atb[perm[r]] -= f * atb[perm[col]];
    }
  }
  for (int col = 3; col >= 0; --col) {
    long double v = atb[perm[col]];
    for (int cidx = col + 1; cidx < 4; ++cidx)
      v -= ata[perm[col]][cidx] * static_cast<long double>(fit.c[cidx]);
    fit.c[col] = static_cast<double>(v / ata[perm[col]][col]);
  }
  return fit;
}

void validate_curve(const RdCurve& curve, const char* label) {
  if (curve.size() < 4)
    throw std::invalid_argument(std::string("bd metric: ") + label +
                                " curve needs at least 4 points");
  for (const RdPoint& p : curve)
    if (!(p.rate > 0.0))
      throw std::invalid_argument(std::string("bd metric: ") + label +
                                  " curve has non-positive rate");
  std::vector<double> rates;
  for (const RdPoint& p : curve) rates.push_back(p.rate);
  std::sort(rates.begin(), rates.end());
  if (std::adjacent_find(rates.begin(), rates.end()) != rates.end())
    throw std::invalid_argument(std::string("bd metric: ") + label +
                                " curve has duplicate rates");
}

struct Axes {
  std::vector<double> x, y;
  double lo = 0, hi = 0;  // of x
};

Axes split_axes(const RdCurve& curve, bool log_rate_as_y) {
  Axes a;
  for (const RdPoint& p : curve) {
    if (log_rate_as_y) {
      a.x.push_back(p.psnr);
      a.y.push_back(std::log(p.rate));
    } else {
      a.x.push_back(std::log(p.rate));
      a.y.push_back(p.psnr);
    }
  }
  a.lo = *std::min_element(a.x.begin(), a.x.end());
  a.hi = *std::max_element(a.x.begin(), a.x.end());
  return a;
}

double bd_delta(const RdCurve& reference, const RdCurve& test,
                bool log_rate_as_y) {
  validate_curve(reference, "reference");
  validate_curve(test, "test");
  const Axes ref = split_axes(reference, log_rate_as_y);
  const Axes tst = split_axes(test, log_rate_as_y);
  const double lo = std::max(ref.lo, tst.lo);
  const double hi = std::min(ref.hi, tst.hi);
  if (!(hi > lo))
    throw std::domain_error(
        "bd metric: curves have no overlapping interval");
  const CubicFit fr = fit_cubic(ref.x, ref.y);
  const CubicFit ft = fit_cubic(tst.x, tst.y);
  return (ft.integral(lo, hi) - fr.integral(lo, hi)) / (hi - lo);
}

}  // namespace

double bd_rate(const RdCurve& reference, const RdCurve& test) {
  const double avg_log_diff = bd_delta(reference, test, /*log_rate_as_y=*/true);
  return (std::exp(avg_log_diff) - 1.0) * 100.0;
}

double bd_psnr(const RdCurve& reference, const RdCurve& test) {
  return bd_delta(reference, test, /*log_rate_as_y=*/false);
}

RdCurve read_rd_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  RdCurve curve;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    RdPoint p;
    if (!(row >> p.rate >> p.psnr)) {
      if (curve.empty()) continue;  // tolerate a header line
      throw ParseError(path + ": malformed rate,psnr row '" + line + "'");
    }
    curve.push_back(p);
  }
  if (curve.empty()) throw ParseError(path + ": no data rows");
  return curve;
}

RunSummary summarize(const RunReport& run) {
  if (run.per_qp.empty())
    throw std::invalid_argument("summarize: report has no passes");
  RunSummary summary;
  uint64_t accel_nodes = 0, ref_nodes = 0;
  double accel_cost = 0.0, ref_cost = 0.0;
  for (const QpReport& q : run.per_qp) {
    if (!q.has_reference)
      throw std::invalid_argument("summarize: report lacks a reference pass");
    QpSummary s;
    s.qp = q.qp;
    s.accel_nodes = q.accelerated.nodes;
    s.ref_nodes = q.reference.nodes;
    s.accel_cost = q.accelerated.cost;
    s.ref_cost = q.reference.cost;
    s.delta_t_proxy =
        (static_cast<double>(s.accel_nodes) - static_cast<double>(s.ref_nodes)) /
        static_cast<double>(s.ref_nodes);
    s.delta_cost = (s.accel_cost - s.ref_cost) / s.ref_cost;
    summary.per_qp.push_back(s);
    accel_nodes += s.accel_nodes;
    ref_nodes += s.ref_nodes;
    accel_cost += s.accel_cost;
    ref_cost += s.ref_cost;
  }
  summary.delta_t_proxy =
      (static_cast<double>(accel_nodes) - static_cast<double>(ref_nodes)) /
      static_cast<double>(ref_nodes);
  summary.delta_cost = (accel_cost - ref_cost) / ref_cost;
  return summary;
}

}  // namespace qtl
