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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qssp/hmc.hpp"

namespace qssp {

struct Evolution {
  Vector belief;
  double probability = 0.0;
};

// Bayesian update of a belief after seeing symbol x.
Evolution evolve_mixed_state(const LabeledHMC& hmc, std::span<const double> eta, std::size_t x);

enum class MspKind { ExactFinite, TruncatedCountable, Sampled };
enum class Cardinality { Finite, Countable, Uncountable };

std::string_view to_string(MspKind kind);
std::string_view to_string(Cardinality c);

struct MspOptions {
  double merge_tol = 1e-9;
  std::size_t max_states = 10'000;
  double mass_threshold = 1e-9;
};

// Merges closer than this are treated as floating-point duplicates.
inline constexpr double kExactMergeDistance = 1e-11;

struct MixedStatePresentation {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::vector<std::string> alphabet;
  std::vector<std::string> source_states;
  std::vector<Vector> states;           // state 0 is the start belief pi
  std::vector<std::size_t> successors;  // [state * K + symbol], npos when impossible
  std::vector<double> probabilities;    // [state * K + symbol]
  std::vector<std::size_t> depth;       // breadth-first discovery depth
  Vector stationary;                    // zero on transient states
  std::vector<bool> recurrent;

  MspKind kind = MspKind::ExactFinite;
  Cardinality cardinality = Cardinality::Finite;
  bool closed = true;
  double truncation_mass = 0.0;
  std::size_t approximate_merges = 0;
  double max_merge_distance = 0.0;
  std::vector<std::size_t> level_sizes;  // new states per depth
  std::vector<double> frontier_mass;     // probability of first reaching a state at each depth

  std::size_t size() const noexcept { return states.size(); }
  std::size_t alphabet_size() const noexcept { return alphabet.size(); }
  std::size_t successor(std::size_t s, std::size_t x) const { return successors[s * alphabet.size() + x]; }
  double probability(std::size_t s, std::size_t x) const { return probabilities[s * alphabet.size() + x]; }

  // Word probability from the start state.
  double word_probability(const Word& word) const;

  // All states as a unifilar machine; transient states included.
  LabeledHMC to_hmc() const;

  // Recurrent states only.
  LabeledHMC recurrent_hmc() const;
};

MixedStatePresentation build_msp(const LabeledHMC& hmc, const MspOptions& options = {});

// Keeps the n states of largest stationary mass (ties in discovery order); transitions into
// dropped states go to the nearest kept state in L-infinity distance.
MixedStatePresentation truncate_msp(const MixedStatePresentation& msp, std::size_t n);

struct SeriesPoint {
  std::size_t states = 0;
  double hmu = 0.0;
  double cmu = 0.0;
};

struct MspMetrics {
  double hmu = 0.0;
  double cmu = 0.0;
  std::size_t recurrent_states = 0;
  std::vector<SeriesPoint> series;
};

// Empty series_sizes gives a default ladder for the truncated kind and no series otherwise.
MspMetrics msp_metrics(const MixedStatePresentation& msp, std::vector<std::size_t> series_sizes = {});

struct BeliefTrajectory {
  std::size_t dimension = 0;
  std::vector<double> beliefs;  // row t is the belief before symbols[t]
  Word symbols;

  std::size_t size() const noexcept { return symbols.size(); }
  std::span<const double> belief(std::size_t t) const {
    return {beliefs.data() + t * dimension, dimension};
  }
};

// Visitor receives the belief, the symbol distribution under it, and the drawn symbol.
using BeliefVisitor =
    std::function<void(std::span<const double> eta, std::span<const double> probs, std::size_t x)>;

void walk_blackwell(const LabeledHMC& hmc, std::size_t length, std::size_t burn_in, std::uint64_t seed,
                    const BeliefVisitor& visit);

BeliefTrajectory sample_blackwell(const LabeledHMC& hmc, std::size_t length, std::size_t burn_in,
                                  std::uint64_t seed);

}  // namespace qssp
