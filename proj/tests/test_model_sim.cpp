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

#include <cmath>

#include "qtl/model_sim.h"
#include "qtl/rng.h"

using namespace qtl;

TEST_CASE("logistic link shape") {
  const LogisticLink g{0.0, 1.0};
  CHECK(g(0.0) == 0.5);
  CHECK(g(100.0) > 0.999);
  CHECK(g(-100.0) < 0.001);
  CHECK(g.deriv(0.0) == doctest::Approx(0.25));
  for (double p : {0.01, 0.2, 0.5, 0.8, 0.99})
    CHECK(g(g.inverse(p)) == doctest::Approx(p).epsilon(1e-12));
  CHECK_THROWS_AS(g.inverse(0.0), std::domain_error);
  CHECK_THROWS_AS(g.inverse(1.0), std::domain_error);

  const LogisticLink shifted{0.7, 2.0};
  CHECK(shifted(0.7) == 0.5);
  CHECK(shifted.deriv(0.7) == doctest::Approx(0.125));
}

TEST_CASE("sample_field degenerate laws") {
  SUBCASE("zero variance gives the exact linear ramp") {
    FieldParams p;
    p.mu0 = 0.4;
    p.beta_x = 1.0;
    p.beta_y = -0.5;
    p.sigma2 = 0.0;
    p.spacing = 0.5;
    p.radius = 4;
    const SyntheticField f = sample_field(p);
    for (int dy = -4; dy <= 4; ++dy)
      for (int dx = -4; dx <= 4; ++dx)
        CHECK(f.at({dx, dy}) ==
              doctest::Approx(0.4 + 0.5 * dx - 0.25 * dy).epsilon(1e-12));
  }
  SUBCASE("no drift and no variance gives a constant field") {
    FieldParams p;
    p.mu0 = 1.25;
    p.radius = 3;
    const SyntheticField f = sample_field(p);
    for (double v : f.values) CHECK(v == 1.25);
  }
  SUBCASE("field values are reproducible and radius independent") {
    FieldParams p;
    p.beta_x = 0.3;
    p.sigma2 = 0.2;
    p.radius = 2;
    p.seed = 99;
    const SyntheticField small = sample_field(p);
    p.radius = 5;
    const SyntheticField big = sample_field(p);
    for (int dy = -2; dy <= 2; ++dy)
      for (int dx = -2; dx <= 2; ++dx)
        CHECK(small.at({dx, dy}) == big.at({dx, dy}));
  }
}

TEST_CASE("sample_field marginals match the stated law") {
  // Fixed offset, many seeds: mean mu0 + beta.eta, variance ||eta|| sigma2.
  FieldParams p;
  p.beta_x = 1.0;
  p.sigma2 = 0.04;
  p.spacing = 1.0;
  p.radius = 3;
  const Offset o{3, 0};
  const int n = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int seed = 0; seed < n; ++seed) {
    p.seed = 1000 + seed;
    const double v = sample_field(p).at(o);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = (sum_sq - sum * sum / n) / (n - 1);
  const double want_mean = 3.0;
  const double want_var = 3.0 * 0.04;
  const double se_mean = std::sqrt(want_var / n);
  const double se_var = want_var * std::sqrt(2.0 / (n - 1));
  CHECK(std::fabs(mean - want_mean) < 3 * se_mean);
  CHECK(std::fabs(var - want_var) < 3 * se_var);
}

TEST_CASE("square_neighborhood geometry") {
  CHECK(square_neighborhood(0, 100).size() == 1);
  CHECK(square_neighborhood(2, 100).size() == 25);
  CHECK(square_neighborhood(2, 0).size() == 15);   // dx >= 0 half
  CHECK(square_neighborhood(2, 1).size() == 20);   // dx >= -1
  bool has_origin = false;
  for (const Offset& o : square_neighborhood(3, 0))
    if (o.dx == 0 && o.dy == 0) has_origin = true;
  CHECK(has_origin);
}

TEST_CASE("sample_partitions saturated and balanced links") {
  FieldParams p;
  p.radius = 2;
  p.seed = 5;
  const SyntheticField f = sample_field(p);
  const std::vector<Offset> blocks = square_neighborhood(2, 100);

  SUBCASE("saturated links pin the draws") {
    const LogisticLink hot{-1000.0, 1.0};  // g ~ 1 over the field range
    const LogisticLink cold{1000.0, 1.0};  // g ~ 0
    for (uint8_t x : sample_partitions(f, hot, blocks, 1)) CHECK(x == 1);
    for (uint8_t x : sample_partitions(f, cold, blocks, 1)) CHECK(x == 0);
  }
  SUBCASE("a balanced link draws half within binomial noise") {
    const LogisticLink even{0.0, 1.0};  // field is constant 0 -> p = 0.5
    int64_t ones = 0;
    const int reps = 400;  // 400 draws x 25 blocks = 10^4 Bernoullis
    for (int r = 0; r < reps; ++r)
      for (uint8_t x : sample_partitions(f, even, blocks, 100 + r)) ones += x;
    const double total = reps * 25.0;
    const double se = std::sqrt(0.25 * total);
    CHECK(std::fabs(ones - 0.5 * total) < 3 * se);
  }
}

TEST_CASE("estimator_moments closed forms") {
  SUBCASE("single block reduces to the Bernoulli sd") {
    FieldParams p;
    p.mu0 = 0.3;
    p.radius = 0;
    const SyntheticField f = sample_field(p);
    const LogisticLink g{0.0, 1.0};
    const EstimatorReport r =
        estimator_moments(f, g, {{0, 0}}, 5000, 42);
    const double prob = g(0.3);
    CHECK(r.n == 1);
    CHECK(r.predicted_mean == doctest::Approx(prob));
    CHECK(r.predicted_sd == doctest::Approx(std::sqrt(prob * (1 - prob))));
  }
  SUBCASE("equal probabilities shrink the sd by sqrt(n)") {
    FieldParams p;
    p.mu0 = -0.4;
    p.radius = 2;
    const SyntheticField f = sample_field(p);  // constant field
    const LogisticLink g{0.0, 1.0};
    const std::vector<Offset> offsets = square_neighborhood(2, 100);
    const EstimatorReport r = estimator_moments(f, g, offsets, 5000, 43);
    const double prob = g(-0.4);
    CHECK(r.predicted_sd ==
          doctest::Approx(std::sqrt(prob * (1 - prob) / offsets.size())));
  }
  SUBCASE("zero drift has zero bias bound and centered mean") {
    FieldParams p;
    p.mu0 = 0.1;
    p.sigma2 = 0.01;
    p.radius = 2;
    p.seed = 9;
    const SyntheticField f = sample_field(p);
    const LogisticLink g{0.0, 1.0};
    const std::vector<Offset> offsets = square_neighborhood(2, 100);
    const EstimatorReport r = estimator_moments(f, g, offsets, 20000, 44);
    CHECK(r.bias_bound == 0.0);
    // The empirical mean tracks the realized-field prediction tightly.
    CHECK(std::fabs(r.empirical_mean - r.predicted_mean) <
          4 * r.predicted_sd / std::sqrt(20000.0));
  }
}

TEST_CASE("estimator_moments empirical moments match predictions") {
  // Several field/link shapes; 4-sigma Monte Carlo gates.
  struct Config {
    double mu0, bx, by, s2, spacing;
    int radius, edge;
    double loc, scale;
  };
  const Config configs[] = {
      {0.0, 0.5, 0.2, 0.05, 0.25, 3, 100, 0.0, 1.0},
      {0.2, -0.3, 0.4, 0.02, 0.5, 2, 100, 0.1, 0.8},
      {-0.1, 0.0, 0.0, 0.1, 0.25, 3, 0, 0.0, 1.2},
      {0.4, 1.0, -0.5, 0.0, 0.2, 2, 1, 0.3, 1.5},
      {0.0, 0.2, 0.2, 0.15, 0.3, 4, 2, -0.2, 0.9},
  };
  const int64_t reps = 20000;
  int idx = 0;
  for (const Config& c : configs) {
    CAPTURE(idx);
    FieldParams p;
    p.mu0 = c.mu0;
    p.beta_x = c.bx;
    p.beta_y = c.by;
    p.sigma2 = c.s2;
    p.spacing = c.spacing;
    p.radius = c.radius;
    p.seed = 500 + idx;
    const SyntheticField f = sample_field(p);
    const LogisticLink g{c.loc, c.scale};
    const std::vector<Offset> offsets = square_neighborhood(c.radius, c.edge);
    const EstimatorReport r = estimator_moments(f, g, offsets, reps, 600 + idx);

    const double se_mean = r.predicted_sd / std::sqrt(double(reps));
    CHECK(std::fabs(r.empirical_mean - r.predicted_mean) <= 4 * se_mean);
    const double se_sd = r.predicted_sd / std::sqrt(2.0 * (reps - 1));
    CHECK(std::fabs(r.empirical_sd - r.predicted_sd) <= 4 * se_sd);
    ++idx;
  }
}

TEST_CASE("bias_variance_sweep") {
  SUBCASE("homogeneous field: no bias, Bernoulli sd at every radius") {
    SweepConfig cfg = default_sweep_config();
    cfg.field.beta_x = 0.0;
    cfg.field.beta_y = 0.0;
    cfg.field.sigma2 = 0.0;
    cfg.replications = 20000;
    const std::vector<SweepRow> rows = bias_variance_sweep(cfg);
    const double p = cfg.link(cfg.field.mu0);
    for (const SweepRow& row : rows) {
      CHECK(row.bound == 0.0);
      CHECK(row.bias <= 4 * row.mean_se);
      const double want_sd = std::sqrt(p * (1 - p) / row.n);
      CHECK(row.sd == doctest::Approx(want_sd).epsilon(0.1));
    }
  }
  SUBCASE("strong drift: bias grows with the radius and respects the bound") {
    SweepConfig cfg = default_sweep_config();
    cfg.field.beta_x = 1.0;
    cfg.field.beta_y = 0.0;
    cfg.field.sigma2 = 0.005;
    cfg.replications = 20000;
    const std::vector<SweepRow> rows = bias_variance_sweep(cfg);
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
      CHECK(rows[i + 1].bias + 4 * (rows[i].mean_se + rows[i + 1].mean_se) >=
            rows[i].bias);
    }
    for (const SweepRow& row : rows)
      CHECK(row.bias <= row.bound + 4 * row.mean_se);
  }
  SUBCASE("default preset has an interior optimum") {
    const SweepConfig cfg = default_sweep_config();
    const std::vector<SweepRow> rows = bias_variance_sweep(cfg);
    size_t best = 0;
    for (size_t i = 1; i < rows.size(); ++i)
      if (rows[i].objective < rows[best].objective) best = i;
    CHECK(best > 0);
    CHECK(best + 1 < rows.size());
  }
  SUBCASE("results reproduce bit for bit from the seed") {
    const SweepConfig cfg = default_sweep_config();
    const std::vector<SweepRow> a = bias_variance_sweep(cfg);
    const std::vector<SweepRow> b = bias_variance_sweep(cfg);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].bias == b[i].bias);
      CHECK(a[i].sd == b[i].sd);
      CHECK(a[i].objective == b[i].objective);
    }
  }
}

TEST_CASE("cross_resolution_link") {
  FieldParams p;
  p.mu0 = 0.1;
  p.beta_x = 0.4;
  p.beta_y = 0.1;
  p.sigma2 = 0.01;
  p.spacing = 0.25;
  p.radius = 8;

  SUBCASE("identical links at zero offset agree to sampling noise") {
    const LogisticLink g{0.0, 1.0};
    const LinkCheck check =
        cross_resolution_link(p, g, g, {{0, 0}}, 200000, 11);
    // Both estimates target the same probability; 5 sigma of the pair.
    CHECK(check.max_discrepancy < 5 * std::sqrt(2 * 0.25 / 200000.0));
    CHECK(check.composed_monotone);
  }
  SUBCASE("discrepancy grows with the offset distance under drift") {
    const LogisticLink g1{0.0, 1.0};
    const LogisticLink g2{0.2, 1.4};
    const LinkCheck check = cross_resolution_link(
        p, g1, g2, {{0, 0}, {2, 0}, {4, 0}, {8, 0}}, 100000, 12);
    REQUIRE(check.pairs.size() == 4);
    CHECK(check.pairs[0].discrepancy < check.pairs[2].discrepancy);
    CHECK(check.pairs[2].discrepancy < check.pairs[3].discrepancy);
    CHECK(check.composed_monotone);
  }
  SUBCASE("non-invertible second link is a config error") {
    const LogisticLink ok{0.0, 1.0};
    const LogisticLink broken{0.0, 0.0};
    CHECK_THROWS_AS(
        cross_resolution_link(p, ok, broken, {{0, 0}}, 100, 1),
        std::invalid_argument);
  }
}

TEST_CASE("composed link monotone on a grid") {
  CHECK(composed_link_monotone({0.0, 1.0}, {0.5, 2.0}));
  CHECK(composed_link_monotone({-1.0, 0.3}, {2.0, 5.0}));
}
