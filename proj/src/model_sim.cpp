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

#include "qtl/model_sim.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "qtl/rng.h"

namespace qtl {

double LogisticLink::operator()(double x) const {
  return 1.0 / (1.0 + std::exp(-(x - location) / scale));
}

double LogisticLink::deriv(double x) const {
  const double p = (*this)(x);
  return p * (1.0 - p) / scale;
}

double LogisticLink::inverse(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("LogisticLink::inverse: p must be in (0,1)");
  return location + scale * std::log(p / (1.0 - p));
}

double SyntheticField::true_mean(Offset o) const {
  return params.mu0 + params.beta_x * (o.dx * params.spacing) +
         params.beta_y * (o.dy * params.spacing);
}

double SyntheticField::offset_norm(Offset o) const {
  const double ex = o.dx * params.spacing;
  const double ey = o.dy * params.spacing;
  return std::sqrt(ex * ex + ey * ey);
}

double SyntheticField::at(Offset o) const {
  const int r = params.radius;
  assert(std::abs(o.dx) <= r && std::abs(o.dy) <= r);
  const int stride = 2 * r + 1;
  return values[static_cast<size_t>(o.dy + r) * stride + (o.dx + r)];
}

SyntheticField sample_field(const FieldParams& params) {
  if (params.sigma2 < 0.0)
    throw std::invalid_argument("sample_field: sigma2 must be >= 0");
  if (params.radius < 0 || params.spacing <= 0.0)
    throw std::invalid_argument("sample_field: bad lattice geometry");

  SyntheticField field;
  field.params = params;
  const int r = params.radius;
  const int stride = 2 * r + 1;
  field.values.resize(static_cast<size_t>(stride) * stride);
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const Offset o{dx, dy};
      // Independent per-point streams keep each value a pure function of
      // (seed, offset) regardless of the lattice extent.
      Rng rng(derive_seed(params.seed,
                          static_cast<uint64_t>(static_cast<int64_t>(dx)),
                          static_cast<uint64_t>(static_cast<int64_t>(dy))));
      const double sd = std::sqrt(field.offset_norm(o) * params.sigma2);
      field.values[static_cast<size_t>(dy + r) * stride + (dx + r)] =
          field.true_mean(o) + sd * rng.next_normal();
    }
  }
  return field;
}

std::vector<Offset> square_neighborhood(int radius, int edge_distance) {
  if (radius < 0 || edge_distance < 0)
    throw std::invalid_argument("square_neighborhood: negative geometry");
  std::vector<Offset> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = std::max(-radius, -edge_distance); dx <= radius; ++dx)
      offsets.push_back({dx, dy});
  return offsets;
}

std::vector<uint8_t> sample_partitions(const SyntheticField& field,
                                       const LogisticLink& g,
                                       const std::vector<Offset>& blocks,
                                       uint64_t seed) {
  Rng rng(derive_seed(seed, 0x706172740000ull));
  std::vector<uint8_t> draws(blocks.size());
  for (size_t i = 0; i < blocks.size(); ++i)
    draws[i] = rng.next_bernoulli(g(field.at(blocks[i]))) ? 1 : 0;
  return draws;
}

namespace {

double drift_bias_bound(const SyntheticField& field, const LogisticLink& g,
                        const std::vector<Offset>& offsets) {
  const FieldParams& p = field.params;
  const double beta_norm =
      std::sqrt(p.beta_x * p.beta_x + p.beta_y * p.beta_y);
  double norm_sum = 0.0;
  for (const Offset& o : offsets) norm_sum += field.offset_norm(o);
  return std::abs(g.deriv(p.mu0)) * beta_norm * norm_sum /
         static_cast<double>(offsets.size());
}

}  // namespace

EstimatorReport estimator_moments(const SyntheticField& field,
                                  const LogisticLink& g,
                                  const std::vector<Offset>& offsets,
                                  int64_t replications, uint64_t seed) {
  if (offsets.empty())
    throw std::invalid_argument("estimator_moments: empty neighborhood");
  if (replications < 2)
    throw std::invalid_argument("estimator_moments: need >= 2 replications");

  const int n = static_cast<int>(offsets.size());
  std::vector<double> probs(n);
  double p_sum = 0.0, var_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    probs[j] = g(field.at(offsets[j]));
    p_sum += probs[j];
    var_sum += probs[j] * (1.0 - probs[j]);
  }

  EstimatorReport report;
  report.n = n;
  report.replications = replications;
  report.predicted_mean = p_sum / n;
  report.predicted_sd = std::sqrt(var_sum) / n;
  report.center_prob = g(field.params.mu0);
  report.bias_bound = drift_bias_bound(field, g, offsets);

  // Field held fixed; only the indicator draws are resampled, one stream
  // per replication so any evaluation order gives the same result.
  double sum = 0.0, sum_sq = 0.0;
  for (int64_t rep = 0; rep < replications; ++rep) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(rep), 0x6d6f6dull));
    int count = 0;
    for (int j = 0; j < n; ++j) count += rng.next_unit() < probs[j];
    const double x = static_cast<double>(count) / n;
    sum += x;
    sum_sq += x * x;
  }
  const double r = static_cast<double>(replications);
  report.empirical_mean = sum / r;
  double var = (sum_sq - sum * sum / r) / (r - 1.0);
  report.empirical_sd = std::sqrt(std::max(var, 0.0));
  return report;
}

std::vector<SweepRow> bias_variance_sweep(const SweepConfig& cfg) {
  if (cfg.radii.empty())
    throw std::invalid_argument("bias_variance_sweep: empty radius list");
  if (!std::is_sorted(cfg.radii.begin(), cfg.radii.end()))
    throw std::invalid_argument("bias_variance_sweep: radii must be ascending");
  if (cfg.replications < 2)
    throw std::invalid_argument("bias_variance_sweep: need >= 2 replications");

  const int max_radius = cfg.radii.back();
  FieldParams params = cfg.field;
  params.radius = std::max(params.radius, max_radius);

  // All offsets of the largest neighborhood, ordered by Chebyshev ring so
  // each swept radius is a prefix.
  std::vector<Offset> offsets = square_neighborhood(max_radius, cfg.edge_distance);
  std::stable_sort(offsets.begin(), offsets.end(),
                   [](const Offset& a, const Offset& b) {
                     return std::max(std::abs(a.dx), std::abs(a.dy)) <
                            std::max(std::abs(b.dx), std::abs(b.dy));
                   });
  const int total = static_cast<int>(offsets.size());

  // Prefix length per swept radius.
  std::vector<int> prefix(cfg.radii.size());
  {
    int pos = 0;
    for (size_t ri = 0; ri < cfg.radii.size(); ++ri) {
      while (pos < total &&
             std::max(std::abs(offsets[pos].dx), std::abs(offsets[pos].dy)) <=
                 cfg.radii[ri])
        ++pos;
      prefix[ri] = pos;
    }
  }

  SyntheticField proto;  // geometry helper for norms/means; values unused
  proto.params = params;
  std::vector<double> true_means(total), noise_sd(total);
  for (int j = 0; j < total; ++j) {
    true_means[j] = proto.true_mean(offsets[j]);
    noise_sd[j] = std::sqrt(proto.offset_norm(offsets[j]) * params.sigma2);
  }

  const size_t nr = cfg.radii.size();
  std::vector<double> sum(nr, 0.0), sum_sq(nr, 0.0);
  for (int64_t rep = 0; rep < cfg.replications; ++rep) {
    Rng rng(derive_seed(cfg.seed, static_cast<uint64_t>(rep), 0x73776565ull));
    int count = 0;
    size_t ri = 0;
    for (int j = 0; j < total; ++j) {
      // Fresh field draw and indicator draw per replication.
      const double mu = true_means[j] + noise_sd[j] * rng.next_normal();
      count += rng.next_unit() < cfg.link(mu);
      while (ri < nr && j + 1 == prefix[ri]) {
        const double x = static_cast<double>(count) / prefix[ri];
        sum[ri] += x;
        sum_sq[ri] += x * x;
        ++ri;
      }
    }
  }

  const double center = cfg.link(params.mu0);
  const double r = static_cast<double>(cfg.replications);
  const double beta_norm =
      std::sqrt(params.beta_x * params.beta_x + params.beta_y * params.beta_y);
  const double gd = std::abs(cfg.link.deriv(params.mu0));

  std::vector<SweepRow> rows(nr);
  for (size_t ri = 0; ri < nr; ++ri) {
    SweepRow& row = rows[ri];
    row.radius = cfg.radii[ri];
    row.n = prefix[ri];
    const double mean = sum[ri] / r;
    double var = (sum_sq[ri] - sum[ri] * sum[ri] / r) / (r - 1.0);
    var = std::max(var, 0.0);
    row.bias = std::abs(mean - center);
    row.sd = std::sqrt(var);
    row.mean_se = row.sd / std::sqrt(r);
    double norm_sum = 0.0;
    for (int j = 0; j < prefix[ri]; ++j)
      norm_sum += proto.offset_norm(offsets[j]);
    row.bound = gd * beta_norm * norm_sum / prefix[ri];
    row.objective = row.bias * row.bias + var;
  }
  return rows;
}

SweepConfig default_sweep_config() {
  SweepConfig cfg;
  cfg.field.mu0 = 0.0;
  cfg.field.beta_x = 0.5;
  cfg.field.beta_y = 0.2;
  cfg.field.sigma2 = 0.05;
  cfg.field.spacing = 0.25;
  cfg.field.seed = 20260809;
  cfg.link = {0.0, 1.0};
  cfg.radii = {1, 2, 3, 4, 5, 6, 7, 8};
  cfg.edge_distance = 0;
  cfg.replications = 20000;
  cfg.seed = 7;
  return cfg;
}

LinkCheck cross_resolution_link(const FieldParams& params,
                                const LogisticLink& g1, const LogisticLink& g2,
                                const std::vector<Offset>& pair_offsets,
                                int64_t replications, uint64_t seed) {
  if (g1.scale <= 0.0 || g2.scale <= 0.0)
    throw std::invalid_argument(
        "cross_resolution_link: link scale must be positive (invertible)");
  if (pair_offsets.empty())
    throw std::invalid_argument("cross_resolution_link: no block pairs");
  if (replications < 2)
    throw std::invalid_argument("cross_resolution_link: need >= 2 replications");

  LinkCheck check;
  const double p2 = g2(params.mu0);
  const double r = static_cast<double>(replications);
  SyntheticField proto;
  proto.params = params;

  for (size_t pi = 0; pi < pair_offsets.size(); ++pi) {
    const Offset o = pair_offsets[pi];
    const double mean1 = proto.true_mean(o);
    const double sd1 = std::sqrt(proto.offset_norm(o) * params.sigma2);

    double x1_sum = 0.0, x2_sum = 0.0;
    for (int64_t rep = 0; rep < replications; ++rep) {
      Rng rng(derive_seed(seed, static_cast<uint64_t>(rep),
                          0x6c696e6bull + pi));
      const double mu1 = mean1 + sd1 * rng.next_normal();
      x1_sum += rng.next_bernoulli(g1(mu1));
      x2_sum += rng.next_bernoulli(p2);
    }

    LinkPairRow row;
    row.offset = o;
    row.ex1_empirical = x1_sum / r;
    row.ex2_empirical = x2_sum / r;
    const double clamped =
        std::clamp(row.ex2_empirical, 1.0 / (r + 1.0), 1.0 - 1.0 / (r + 1.0));
    row.ex1_from_ex2 = g1(g2.inverse(clamped));
    row.discrepancy = std::abs(row.ex1_empirical - row.ex1_from_ex2);
    check.max_discrepancy = std::max(check.max_discrepancy, row.discrepancy);
    check.pairs.push_back(row);
  }
  check.composed_monotone = composed_link_monotone(g1, g2);
  return check;
}

bool composed_link_monotone(const LogisticLink& g1, const LogisticLink& g2,
                            int grid_points) {
  double prev = -1.0;
  for (int i = 1; i <= grid_points; ++i) {
    const double p = static_cast<double>(i) / (grid_points + 1);
    const double v = g1(g2.inverse(p));
    if (v <= prev) return false;
    prev = v;
  }
  return true;
}

}  // namespace qtl
