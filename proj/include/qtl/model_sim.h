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

#ifndef QTL_MODEL_SIM_H_
#define QTL_MODEL_SIM_H_

#include <cstdint>
#include <vector>

namespace qtl {

// Monotone link from local detail level to split probability.
struct LogisticLink {
  double location = 0.0;
  double scale = 1.0;  // > 0

  double operator()(double x) const;
  double deriv(double x) const;
  double inverse(double p) const;  // p in (0,1)
};

// Lattice offset from the reference block, in steps.
struct Offset {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
};

// Parameters of the detail field around a reference block: values at offset
// eta are normal with mean mu0 + beta . eta and variance ||eta|| * sigma2
// (eta in field units of `spacing` per lattice step). The reference point
// itself is exactly mu0.
struct FieldParams {
  double mu0 = 0.0;
  double beta_x = 0.0;
  double beta_y = 0.0;
  double sigma2 = 0.0;
  double spacing = 1.0;  // field units per lattice step
  int radius = 8;        // lattice extent, Chebyshev
  uint64_t seed = 1;
};

// One realization of the field on the (2*radius+1)^2 lattice. Each lattice
// point is drawn independently from its marginal law; values are a pure
// function of (seed, params, offset).
struct SyntheticField {
  FieldParams params;
  std::vector<double> values;

  double at(Offset o) const;
  double true_mean(Offset o) const;    // mu0 + beta . eta
  double offset_norm(Offset o) const;  // ||eta||, field units
};

SyntheticField sample_field(const FieldParams& params);

// Offsets with Chebyshev norm <= radius, restricted to dx >= -edge_distance
// (a block `edge_distance` steps from the left frame edge has no neighbors
// further left). Includes the origin. Pass a large edge_distance for the
// unclipped square.
std::vector<Offset> square_neighborhood(int radius, int edge_distance);

// Independent split-indicator draws, one per block, P(X=1) = g(mu(block)).
std::vector<uint8_t> sample_partitions(const SyntheticField& field,
                                       const LogisticLink& g,
                                       const std::vector<Offset>& blocks,
                                       uint64_t seed);

struct EstimatorReport {
  int n = 0;
  double empirical_mean = 0.0;
  double empirical_sd = 0.0;
  double predicted_mean = 0.0;  // mean of g(mu_j)
  double predicted_sd = 0.0;    // sqrt(sum g(1-g)) / n
  double bias_bound = 0.0;      // |g'(mu0)| ||beta|| sum||eta_j|| / n
  double center_prob = 0.0;     // g(mu0)
  int64_t replications = 0;
};

// Holds the field realization fixed and resamples the indicators: the
// empirical moments of the neighborhood mean estimate are compared against
// the closed-form mean/sd implied by the realized field values.
EstimatorReport estimator_moments(const SyntheticField& field,
                                  const LogisticLink& g,
                                  const std::vector<Offset>& offsets,
                                  int64_t replications, uint64_t seed);

struct SweepRow {
  int radius = 0;
  int n = 0;
  double bias = 0.0;     // |mean estimate - g(mu0)| over replications
  double sd = 0.0;       // across replications (field + indicator noise)
  double bound = 0.0;    // drift-bias upper bound
  double mean_se = 0.0;  // MC standard error of the mean
  double objective = 0.0;  // bias^2 + sd^2
};

struct SweepConfig {
  FieldParams field;
  LogisticLink link;
  std::vector<int> radii;
  int edge_distance = 0;  // block sits at the frame edge by default
  int64_t replications = 10000;
  uint64_t seed = 7;
};

// Resamples the field and the indicators per replication and tabulates
// bias, spread, and the drift bound per neighborhood radius.
std::vector<SweepRow> bias_variance_sweep(const SweepConfig& cfg);

SweepConfig default_sweep_config();

struct LinkPairRow {
  Offset offset;
  double ex1_empirical = 0.0;
  double ex2_empirical = 0.0;
  double ex1_from_ex2 = 0.0;  // g1(g2^-1(ex2_empirical))
  double discrepancy = 0.0;
};

struct LinkCheck {
  std::vector<LinkPairRow> pairs;
  double max_discrepancy = 0.0;
  bool composed_monotone = true;
};

// For block pairs at the given offsets, estimates the split rates of both
// rungs by simulation and checks that mapping the second rung's rate through
// g1 o g2^-1 recovers the first rung's rate. Throws std::invalid_argument
// when g2 is not invertible (non-positive scale).
LinkCheck cross_resolution_link(const FieldParams& params,
                                const LogisticLink& g1, const LogisticLink& g2,
                                const std::vector<Offset>& pair_offsets,
                                int64_t replications, uint64_t seed);

// Strict monotonicity of g1 o g2^-1 on a probability grid in (0,1).
bool composed_link_monotone(const LogisticLink& g1, const LogisticLink& g2,
                            int grid_points = 101);

}  // namespace qtl

#endif  // QTL_MODEL_SIM_H_
