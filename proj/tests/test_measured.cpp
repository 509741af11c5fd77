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

#include "qssp/sweep.hpp"
#include "support.hpp"

namespace qssp {
namespace {

using testing::kPi;

CCQS two_symbol_source(const LabeledHMC& hmc, const QubitPureState& s0, const QubitPureState& s1) {
  return CCQS{hmc, {s0, s1}, "test"};
}

void expect_same_matrices(const LabeledHMC& a, const LabeledHMC& b, double tol) {
  ASSERT_EQ(a.alphabet_size(), b.alphabet_size());
  for (std::size_t x = 0; x < a.alphabet_size(); ++x)
    for (std::size_t i = 0; i < a.num_states(); ++i)
      for (std::size_t j = 0; j < a.num_states(); ++j)
        EXPECT_NEAR(a.labeled(x)(i, j), b.labeled(x)(i, j), tol) << x << " " << i << " " << j;
}

TEST(Measured, OrthogonalSourceInObservationBasisIsGoldenMean) {
  const Model m = testing::load("ob_golden_mean");
  const MeasuredHMC out = derive_measured_hmc(m.source(), projective_basis(0.0, 0.0));
  // Source alphabet order is (zero, one); outcome "0" is |0>.
  expect_same_matrices(out.hmc, testing::golden_mean(), 1e-12);
  EXPECT_TRUE(unifilarity(out.hmc).unifilar);
  EXPECT_NEAR(entropy_rate_unifilar(out.hmc), 2.0 / 3.0, 1e-12);
}

TEST(Measured, NonorthogonalSourceInDiagonalBasis) {
  const Model m = testing::load("nonorthogonal_golden_mean");
  const MeasuredHMC out = derive_measured_hmc(m.source(), projective_basis(kPi / 2.0, 0.0));
  expect_same_matrices(out.hmc, testing::countable_chain_machine(), 1e-12);
  const auto u = unifilarity(out.hmc);
  ASSERT_FALSE(u.unifilar);
  ASSERT_EQ(u.witnesses.size(), 1u);
  EXPECT_EQ(u.witnesses[0].state, 0u);
  EXPECT_EQ(u.witnesses[0].symbol, 0u);
  EXPECT_EQ(u.witnesses[0].successors, (std::vector<std::size_t>{0, 1}));
}

TEST(Measured, PreservesInternalChainAndStationary) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const LabeledHMC h = testing::random_hmc(rng, 3, 2);
    const CCQS src = two_symbol_source(h, testing::random_qubit(rng), testing::random_qubit(rng));
    const MeasuredHMC out = derive_measured_hmc(src, projective_basis(kPi * rng.uniform(), 2 * kPi * rng.uniform()));
    EXPECT_TRUE(validate(out.hmc).ok);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(out.hmc.internal()(i, j), h.internal()(i, j), 1e-12);
    EXPECT_LT(max_abs_diff(out.hmc.stationary(), h.stationary()), 1e-10);
  }
}

TEST(Measured, UsdOnQemSourceHasThreeOutcomes) {
  const CCQS src = qem0_source(1.0);
  const MeasuredHMC out =
      derive_measured_hmc(src, usd_povm(src.quantum_alphabet[0], src.quantum_alphabet[1]));
  ASSERT_EQ(out.hmc.alphabet_size(), 3u);
  const double p = 1.0 - std::cos(0.5);
  // psi from A to A and B to A, phi from A to B.
  EXPECT_NEAR(out.hmc.labeled(0)(0, 0), 0.5 * p, 1e-12);
  EXPECT_NEAR(out.hmc.labeled(0)(1, 0), p, 1e-12);
  EXPECT_NEAR(out.hmc.labeled(0)(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(out.hmc.labeled(1)(0, 1), 0.5 * p, 1e-12);
  EXPECT_NEAR(out.hmc.labeled(1)(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(out.hmc.labeled(2)(0, 0), 0.5 * (1 - p), 1e-12);
  EXPECT_NEAR(out.hmc.labeled(2)(0, 1), 0.5 * (1 - p), 1e-12);
  EXPECT_NEAR(out.hmc.labeled(2)(1, 0), 1 - p, 1e-12);
}

TEST(Measured, AlphabetMismatch) {
  const CCQS bad{testing::golden_mean(), {qubit_from_bloch(0, 0)}, "bad"};
  try {
    derive_measured_hmc(bad, projective_basis(0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AlphabetMismatch);
  }
}

TEST(Measured, ProvenanceKept) {
  const Model m = testing::load("nonorthogonal_golden_mean");
  const MeasuredHMC out = derive_measured_hmc(m.source(), projective_basis(0.3, 0.0),
                                              Provenance{"x", "projective", {{"theta", 0.3}}});
  EXPECT_EQ(out.provenance.source, "x");
  ASSERT_EQ(out.provenance.parameters.size(), 1u);
}

TEST(Memoryless, AnglesForKnownPairs) {
  const auto z0 = qubit_from_bloch(0, 0);
  const auto plus = qubit_from_bloch(kPi / 2, 0);
  const auto a = qubit_from_bloch(2 * kPi / 5, 0);
  EXPECT_NEAR(memoryless_angles(z0, plus).theta, kPi / 4, 1e-12);
  EXPECT_NEAR(memoryless_angles(a, z0).theta, kPi / 5, 1e-12);
  EXPECT_NEAR(memoryless_angles(z0, qubit_from_bloch(kPi, 0)).theta, kPi / 2, 1e-12);
}

TEST(Memoryless, MeasuredMatricesProportionalToInternal) {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const LabeledHMC h = testing::random_hmc(rng, 3, 2);
    const auto s0 = testing::random_qubit(rng), s1 = testing::random_qubit(rng);
    if (s0.same_state(s1, 1e-3)) continue;
    const CCQS src = two_symbol_source(h, s0, s1);
    const double gamma = 2 * kPi * rng.uniform();
    const MeasuredHMC out = derive_measured_hmc(src, memoryless_basis(s0, s1, gamma));
    EXPECT_TRUE(is_memoryless(out.hmc, 1e-10)) << trial;
    // Both states give the same outcome distribution.
    const Measurement m = memoryless_basis(s0, s1, gamma);
    EXPECT_NEAR(outcome_probability(m.operators()[0], s0), outcome_probability(m.operators()[0], s1), 1e-10);
  }
}

TEST(Memoryless, ModelSources) {
  for (const char* name : {"nonorthogonal_golden_mean", "rip"}) {
    const Model m = testing::load(name);
    const CCQS src = m.source();
    const MeasuredHMC out = derive_measured_hmc(src, memoryless_basis(src.quantum_alphabet[0], src.quantum_alphabet[1]));
    EXPECT_TRUE(is_memoryless(out.hmc, 1e-12)) << name;
  }
}

TEST(Memoryless, DetectsNonMemoryless) {
  EXPECT_FALSE(is_memoryless(testing::golden_mean()));
  EXPECT_TRUE(is_memoryless(testing::biased_coin(0.3)));
}

TEST(Preservation, PredictionImpliesUnifilarMeasuredMachine) {
  Rng rng(12);
  int predicted = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const LabeledHMC h =
        trial % 2 ? testing::random_unifilar(rng, 3, 2) : testing::random_hmc(rng, 3, 2, 1);
    QubitPureState s0 = testing::random_qubit(rng);
    QubitPureState s1 = trial % 3 == 0 ? s0.orthogonal() : testing::random_qubit(rng);
    const CCQS src = two_symbol_source(h, s0, s1);
    const Measurement m = trial % 3 == 0
                              ? projective_basis(angles_of(s0.bloch()).theta, angles_of(s0.bloch()).phi)
                              : projective_basis(kPi * rng.uniform(), 2 * kPi * rng.uniform());
    const PreservationReport r = unifilarity_preservation_check(src, m);
    ASSERT_EQ(r.states.size(), 3u);
    if (r.predicts_unifilar) {
      ++predicted;
      EXPECT_TRUE(unifilarity(derive_measured_hmc(src, m).hmc).unifilar) << trial;
    }
  }
  EXPECT_GT(predicted, 20);
}

TEST(Preservation, NonorthogonalSourceFlagged) {
  const Model m = testing::load("nonorthogonal_golden_mean");
  const PreservationReport r = unifilarity_preservation_check(m.source(), projective_basis(kPi / 2, 0));
  EXPECT_FALSE(r.predicts_unifilar);
  EXPECT_FALSE(r.states[0].orthogonal_emissions);
  EXPECT_TRUE(r.states[1].single_target);
}

TEST(Preservation, ObservationBasisOnOrthogonalSource) {
  const Model m = testing::load("ob_golden_mean");
  const PreservationReport r = unifilarity_preservation_check(m.source(), projective_basis(0, 0));
  EXPECT_TRUE(r.predicts_unifilar);
}

}  // namespace
}  // namespace qssp
