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

using testing::all_words;

TEST(Evolve, CountableMachineSteps) {
  const LabeledHMC h = testing::countable_chain_machine();
  const Vector pi = h.stationary();
  EXPECT_NEAR(pi[0], 2.0 / 3.0, 1e-12);
  const Evolution e0 = evolve_mixed_state(h, pi, 0);
  EXPECT_NEAR(e0.probability, 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(e0.belief[0], 0.8, 1e-12);
  const Evolution e1 = evolve_mixed_state(h, pi, 1);
  EXPECT_NEAR(e1.probability, 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(e1.belief[1], 1.0, 1e-12);
}

TEST(Evolve, ZeroProbabilitySymbol) {
  const LabeledHMC h = testing::golden_mean();
  try {
    evolve_mixed_state(h, Vector{0.0, 1.0}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroProbabilitySymbol);
  }
}

TEST(Evolve, StaysOnSimplex) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const LabeledHMC h = testing::random_hmc(rng, 4, 3);
    Vector eta = testing::random_weights(rng, 4);
    for (int step = 0; step < 50; ++step) {
      Vector probs(3, 0.0);
      for (std::size_t y = 0; y < 3; ++y)
        for (std::size_t s = 0; s < 4; ++s) probs[y] += eta[s] * h.emission_probability(s, y);
      ASSERT_NEAR(sum(probs), 1.0, 1e-12);
      std::size_t x = testing::pick(rng, 3);
      while (probs[x] <= kZeroProbability) x = (x + 1) % 3;
      const Evolution e = evolve_mixed_state(h, eta, x);
      ASSERT_NEAR(e.probability, probs[x], 1e-12);
      eta = e.belief;
      ASSERT_NEAR(sum(eta), 1.0, 1e-12);
      for (double v : eta) ASSERT_GE(v, 0.0);
    }
  }
}

TEST(Msp, GoldenMeanIsExactFinite) {
  const MixedStatePresentation m = build_msp(testing::golden_mean());
  EXPECT_EQ(m.kind, MspKind::ExactFinite);
  EXPECT_EQ(m.cardinality, Cardinality::Finite);
  EXPECT_TRUE(m.closed);
  const MspMetrics r = msp_metrics(m);
  EXPECT_NEAR(r.hmu, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.cmu, 0.918295834054, 1e-10);
  EXPECT_EQ(r.recurrent_states, 2u);
}

TEST(Msp, UnifilarForRandomNonunifilarMachines) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const LabeledHMC h = testing::random_nonunifilar(rng, 3, 2);
    MspOptions opt;
    opt.max_states = 2000;
    const MixedStatePresentation m = build_msp(h, opt);
    EXPECT_TRUE(unifilarity(m.to_hmc()).unifilar) << trial;
    for (std::size_t s = 0; s < m.size(); ++s) {
      double total = 0.0;
      for (std::size_t x = 0; x < m.alphabet_size(); ++x) {
        if (m.successor(s, x) == MixedStatePresentation::npos) continue;
        total += m.probability(s, x);
      }
      ASSERT_NEAR(total, 1.0, 1e-9);
      ASSERT_NEAR(sum(m.states[s]), 1.0, 1e-12);
    }
  }
}

TEST(Msp, ExactFiniteWordProbabilitiesMatchSourceUpToLengthTen) {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const LabeledHMC h = testing::random_split_finite(rng, 4, 2);
    ASSERT_FALSE(unifilarity(h).unifilar);
    const MixedStatePresentation m = build_msp(h);
    ASSERT_EQ(m.kind, MspKind::ExactFinite);
    double worst = 0.0;
    for (std::size_t l = 1; l <= 10; ++l)
      for (const auto& w : all_words(2, l)) worst = std::max(worst, std::abs(m.word_probability(w) - word_probability(h, w)));
    EXPECT_LT(worst, 1e-9) << trial;
  }
}

TEST(Msp, ApproximateMergesBoundWordError) {
  // Each merge moves a belief by at most merge_tol, so a length-L word drifts by at most L * merge_tol.
  Rng rng(15);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 10; ++trial) {
    const LabeledHMC h = testing::random_nonunifilar(rng, 3, 2);
    const MixedStatePresentation m = build_msp(h);
    if (!m.closed || m.approximate_merges == 0) continue;
    ++checked;
    for (std::size_t l = 1; l <= 10; ++l) {
      double worst = 0.0;
      for (const auto& w : all_words(2, l)) worst = std::max(worst, std::abs(m.word_probability(w) - word_probability(h, w)));
      EXPECT_LE(worst, static_cast<double>(l) * MspOptions{}.merge_tol) << trial << " L=" << l;
    }
  }
  EXPECT_EQ(checked, 10);
}

TEST(Msp, UnifilarSourceEntropyRate) {
  Rng rng(16);
  std::size_t closed = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const LabeledHMC h = testing::random_unifilar(rng, 4, 2);
    const MixedStatePresentation m = build_msp(h);
    ASSERT_NE(m.kind, MspKind::Sampled) << trial;
    const double err = std::abs(msp_metrics(m).hmu - entropy_rate_unifilar(h));
    if (!m.closed) {
      // Transient never synchronized within the cap: an error must come with a reported leak.
      EXPECT_EQ(m.kind, MspKind::TruncatedCountable);
      EXPECT_TRUE(err < 1e-8 || m.truncation_mass > 0.0) << trial;
      continue;
    }
    ++closed;
    EXPECT_LT(err, m.approximate_merges == 0 ? 1e-12 : 1e-8) << trial;
  }
  EXPECT_GE(closed, 15u);
}

TEST(Msp, MemorylessMachineHasOneRecurrentState) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const LabeledHMC h = testing::random_hmc(rng, 3, 1, 2);
    Matrix t0 = h.internal(), t1 = h.internal();
    t0 *= 0.3;
    t1 *= 0.7;
    const std::vector<Matrix> t{t0, t1};
    const LabeledHMC iid(h.states(), {"0", "1"}, t);
    const MixedStatePresentation m = build_msp(iid);
    ASSERT_EQ(m.size(), 1u);
    const MspMetrics r = msp_metrics(m);
    EXPECT_NEAR(r.cmu, 0.0, 1e-15);
    EXPECT_NEAR(r.hmu, testing::binary_entropy(0.3), 1e-12);
  }
}

TEST(Msp, CountableMachineIsTruncatedCountable) {
  const MixedStatePresentation m = build_msp(testing::countable_chain_machine());
  EXPECT_EQ(m.cardinality, Cardinality::Countable);
  EXPECT_EQ(m.kind, MspKind::TruncatedCountable);
  const MspMetrics r = msp_metrics(m);
  EXPECT_NEAR(r.hmu, 0.599, 0.005);
  EXPECT_NEAR(r.cmu, 3.69, 0.05);
  ASSERT_FALSE(r.series.empty());
  EXPECT_EQ(r.series.back().states, m.size());
}

TEST(Msp, ExactMergesAtZeroTolerance) {
  MspOptions opt;
  opt.merge_tol = 0.0;
  const MixedStatePresentation m = build_msp(testing::countable_chain_machine(), opt);
  EXPECT_EQ(m.approximate_merges, 0u);
  EXPECT_LE(m.max_merge_distance, kExactMergeDistance);
}

TEST(Msp, TruncationKeepsMassAndUnifilarity) {
  const MixedStatePresentation m = build_msp(testing::countable_chain_machine());
  for (std::size_t n : {1u, 3u, 10u}) {
    const MixedStatePresentation t = truncate_msp(m, n);
    EXPECT_EQ(t.size(), n);
    EXPECT_TRUE(unifilarity(t.to_hmc()).unifilar);
    EXPECT_NEAR(sum(t.stationary), 1.0, 1e-9);
  }
  EXPECT_EQ(truncate_msp(m, 10'000).size(), m.size());
}

TEST(Msp, OverflowDiagnosedAsUncountable) {
  const Model nemo = testing::load("nemo");
  const MeasuredHMC h = derive_measured_hmc(nemo.source(), projective_basis(0, 0));
  MspOptions opt;
  opt.max_states = 2000;
  const MixedStatePresentation m = build_msp(h.hmc, opt);
  EXPECT_FALSE(m.closed);
  EXPECT_EQ(m.kind, MspKind::Sampled);
  EXPECT_EQ(m.cardinality, Cardinality::Uncountable);
  try {
    msp_metrics(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SampledKindUnsupported);
  }
}

TEST(Blackwell, TrajectoryIsDeterministicAndOnSimplex) {
  const LabeledHMC h = testing::countable_chain_machine();
  const BeliefTrajectory a = sample_blackwell(h, 1000, 10, 5);
  const BeliefTrajectory b = sample_blackwell(h, 1000, 10, 5);
  EXPECT_EQ(a.beliefs, b.beliefs);
  EXPECT_EQ(a.symbols, b.symbols);
  for (std::size_t t = 0; t < a.size(); ++t) ASSERT_NEAR(a.belief(t)[0] + a.belief(t)[1], 1.0, 1e-12);
}

}  // namespace
}  // namespace qssp
