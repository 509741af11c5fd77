// Copyright 2026 The QSSP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace qssp {
namespace {

using testing::kPi;

TEST(Blackwell, GoldenMean) {
  const EntropyRateEstimate e = blackwell_entropy_rate(testing::golden_mean(), 1'000'000, 1000, 1);
  EXPECT_NEAR(e.hmu, 2.0 / 3.0, 1e-3);
  EXPECT_GT(e.standard_error, 0.0);
  EXPECT_EQ(e.length, 1'000'000u);
}

TEST(Blackwell, IidCoin) {
  const double p = std::pow(std::cos(kPi / 5), 2);
  const EntropyRateEstimate e = blackwell_entropy_rate(testing::biased_coin(p), 1'000'000, 0, 2);
  EXPECT_NEAR(e.hmu, testing::binary_entropy(p), 1e-3);
}

TEST(Blackwell, MatchesClosedFormOnRandomUnifilarMachines) {
  Rng rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const LabeledHMC h = testing::random_unifilar(rng, 4, 2);
    const EntropyRateEstimate e = blackwell_entropy_rate(h, 200'000, 1000, derive_seed(18, trial));
    EXPECT_LE(std::abs(e.hmu - entropy_rate_unifilar(h)), 3 * e.standard_error) << trial;
  }
}

TEST(Blackwell, BoundedByNaiveRateOnNonunifilarMachines) {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const LabeledHMC h = testing::random_nonunifilar(rng, 4, 2);
    const EntropyRateEstimate e = blackwell_entropy_rate(h, 200'000, 1000, derive_seed(19, trial));
    EXPECT_LE(e.hmu, transition_entropy(h) + 3 * e.standard_error) << trial;
  }
}

TEST(Blackwell, CountableMachine) {
  const EntropyRateEstimate e = blackwell_entropy_rate(testing::countable_chain_machine(), 1'000'000, 1000, 3);
  const double exact = msp_metrics(build_msp(testing::countable_chain_machine())).hmu;
  EXPECT_LE(std::abs(e.hmu - exact), std::max(3 * e.standard_error, 1e-3));
}

// Points on the segment {(u, 1 - u)} stored as 2-dim beliefs.
std::vector<double> uniform_segment(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    pts.push_back(u);
    pts.push_back(1.0 - u);
  }
  return pts;
}

TEST(CoarseGrained, UniformSegmentGivesLogBins) {
  const auto pts = uniform_segment(1'000'000, 4);
  for (int k = 2; k <= 8; ++k) EXPECT_NEAR(coarse_grained_entropy(pts, 2, std::ldexp(1.0, -k)), k, 0.01) << k;
}

TEST(CoarseGrained, TwoClustersGiveOneBit) {
  std::vector<double> pts;
  for (int i = 0; i < 1000; ++i) {
    const double u = i % 2 ? 0.2 : 0.7;
    pts.insert(pts.end(), {u, 1 - u});
  }
  EXPECT_NEAR(coarse_grained_entropy(pts, 2, 0.01), 1.0, 1e-12);
}

TEST(CoarseGrained, MonotoneInResolution) {
  Rng rng(5);
  std::vector<double> pts;
  for (int i = 0; i < 100'000; ++i) {
    const Vector w = testing::random_weights(rng, 3);
    pts.insert(pts.end(), w.begin(), w.end());
  }
  double prev = -1.0;
  for (double eps : eps_grid()) {
    const double h = coarse_grained_entropy(pts, 3, eps);
    EXPECT_GE(h, prev - 1e-12);
    prev = h;
  }
}

TEST(CoarseGrained, Grid) {
  const auto g = eps_grid();
  ASSERT_EQ(g.size(), 13u);
  EXPECT_DOUBLE_EQ(g.front(), 0.125);
  EXPECT_DOUBLE_EQ(g.back(), std::ldexp(1.0, -12));
}

TEST(Dimension, UniformSegmentIsOne) {
  const auto pts = uniform_segment(2'000'000, 6);
  const DimensionFit f = dimension_from_points(pts, 2, eps_grid());
  EXPECT_FALSE(f.error.has_value());
  EXPECT_NEAR(f.dmu, 1.0, 0.02);
  EXPECT_GE(f.r2, kMinFitR2);
}

TEST(Dimension, PointMassesAreZero) {
  std::vector<double> pts;
  for (int i = 0; i < 10'000; ++i) {
    const double u = (i % 3) * 0.3 + 0.05;
    pts.insert(pts.end(), {u, 1 - u});
  }
  const DimensionFit f = dimension_from_points(pts, 2, eps_grid());
  EXPECT_NEAR(f.dmu, 0.0, 1e-12);
}

TEST(Dimension, FitRecoversKnownSlope) {
  const auto eps = eps_grid();
  std::vector<double> h;
  for (double e : eps) h.push_back(0.3 - 0.7 * std::log2(e));
  const DimensionFit f = fit_dimension(eps, h, 1.0);
  EXPECT_NEAR(f.dmu, 0.7, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_EQ(f.first, 0u);
  EXPECT_EQ(f.last, eps.size() - 1);
}

TEST(Dimension, ClampedToSimplexDimension) {
  const auto eps = eps_grid();
  std::vector<double> h;
  for (double e : eps) h.push_back(-3.0 * std::log2(e));
  EXPECT_NEAR(fit_dimension(eps, h, 2.0).dmu, 2.0, 1e-12);
}

TEST(Dimension, NoisyCurveFlagged) {
  const auto eps = eps_grid();
  std::vector<double> h;
  for (std::size_t i = 0; i < eps.size(); ++i) h.push_back(i % 2 ? 5.0 : 0.0);
  const DimensionFit f = fit_dimension(eps, h, 1.0);
  ASSERT_TRUE(f.error.has_value());
  EXPECT_EQ(*f.error, ErrorCode::InsufficientLinearRegime);
}

TEST(ComputeMetrics, UnifilarUsesClosedForm) {
  MetricsConfig c;
  const MetricsReport r = compute_metrics(testing::golden_mean(), c);
  EXPECT_EQ(r.hmu_method, "closed-form");
  EXPECT_NEAR(r.hmu, 2.0 / 3.0, 1e-12);
  ASSERT_TRUE(r.cmu.has_value());
  EXPECT_NEAR(*r.cmu, 0.918295834054, 1e-10);
  EXPECT_EQ(r.cardinality, Cardinality::Finite);
}

TEST(ComputeMetrics, CountableUsesMsp) {
  MetricsConfig c;
  const MetricsReport r = compute_metrics(testing::countable_chain_machine(), c);
  EXPECT_EQ(r.cardinality, Cardinality::Countable);
  ASSERT_TRUE(r.cmu.has_value());
  EXPECT_NEAR(*r.cmu, 3.69, 0.05);
  EXPECT_FALSE(r.series.empty());
}

TEST(ComputeMetrics, UncountableSampled) {
  const Model nemo = testing::load("nemo");
  MetricsConfig c;
  c.length = 200'000;
  c.sample = 200'000;
  c.msp.max_states = 2000;
  const MetricsReport r = compute_metrics(derive_measured_hmc(nemo.source(), projective_basis(0, 0)).hmc, c);
  EXPECT_EQ(r.cardinality, Cardinality::Uncountable);
  EXPECT_FALSE(r.cmu.has_value());
  EXPECT_EQ(r.hmu_method, "blackwell");
  EXPECT_GT(r.dmu, 0.5);
  EXPECT_NEAR(r.hmu, 0.8896, 0.01);
}

}  // namespace
}  // namespace qssp
