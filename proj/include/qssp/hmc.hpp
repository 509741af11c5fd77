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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qssp/error.hpp"
#include "qssp/linalg.hpp"

namespace qssp {

// Transitions with probability below this are treated as absent.
inline constexpr double kZeroProbability = 1e-12;
inline constexpr double kRowSumTolerance = 1e-12;

using Word = std::vector<std::size_t>;

/// Edge-labeled hidden Markov chain: labeled(x)(s, s') = Pr(x, s' | s).
///
/// Instances are immutable after construction. The stationary distribution
/// is computed on first use and shared between copies; concurrent readers
/// are safe.
class LabeledHMC {
 public:
  LabeledHMC(std::vector<std::string> states, std::vector<std::string> alphabet,
             std::vector<Matrix> labeled);

  std::size_t num_states() const noexcept { return states_.size(); }
  std::size_t alphabet_size() const noexcept { return alphabet_.size(); }

  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const Matrix& labeled(std::size_t symbol) const { return labeled_.at(symbol); }
  const std::vector<Matrix>& labeled_matrices() const noexcept { return labeled_; }

  // Internal chain T = sum_x T^(x).
  const Matrix& internal() const noexcept { return internal_; }

  // Pr(x | state) = sum_s' T^(x)(state, s').
  double emission_probability(std::size_t state, std::size_t symbol) const {
    return emission_(state, symbol);
  }

  std::optional<std::size_t> state_index(const std::string& name) const;
  std::optional<std::size_t> symbol_index(const std::string& name) const;

  // Lazily computed; throws Error(ConvergenceFailure) on failure.
  const Vector& stationary() const;

 private:
  struct StationaryCache;

  std::vector<std::string> states_;
  std::vector<std::string> alphabet_;
  std::vector<Matrix> labeled_;
  Matrix internal_;
  Matrix emission_;
  std::shared_ptr<StationaryCache> cache_;
};

struct ValidationResult {
  bool ok = true;
  std::optional<ErrorCode> code;
  std::string message;
  std::string location;

  // Throws Error when !ok.
  void throw_if_invalid() const;
};

ValidationResult validate(const LabeledHMC& hmc);

struct StationaryOptions {
  double tolerance = 1e-13;
  std::size_t max_iterations = 1'000'000;
};

Vector stationary_distribution(const LabeledHMC& hmc, const StationaryOptions& options = {});

// Stationary distribution of any row-stochastic matrix with one recurrent
// class: power iteration from uniform, falling back to a direct solve.
Vector stationary_of(const Matrix& transition, const StationaryOptions& options = {});

struct UnifilarityWitness {
  std::size_t state;
  std::size_t symbol;
  std::vector<std::size_t> successors;
};

struct UnifilarityReport {
  bool unifilar = true;
  std::vector<UnifilarityWitness> witnesses;
};

UnifilarityReport unifilarity(const LabeledHMC& hmc);

// pi . T^(w) . 1; empty word gives 1.
double word_probability(const LabeledHMC& hmc, const Word& word);
double word_probability(const LabeledHMC& hmc, const std::vector<std::string>& word);
// Same, starting from an arbitrary distribution over states.
double word_probability(const LabeledHMC& hmc, const Vector& initial, const Word& word);

Word parse_word(const LabeledHMC& hmc, const std::vector<std::string>& symbols);

Word sample_sequence(const LabeledHMC& hmc, std::size_t length, std::uint64_t seed);

// -sum_s pi_s sum_x sum_s' T^x log2 T^x, without checking unifilarity. For a
// nonunifilar presentation this overestimates the process entropy rate.
double transition_entropy(const LabeledHMC& hmc);

// Closed-form entropy rate; throws Error(NotUnifilar).
double entropy_rate_unifilar(const LabeledHMC& hmc);

// H[pi] in bits.
double state_entropy(const LabeledHMC& hmc);

inline constexpr std::uint64_t kMaxEnumeratedWords = std::uint64_t{1} << 24;

// H[X_{0:L}] by exact enumeration; throws Error(BlockTooLarge) if K^L > 2^24.
double block_entropy(const LabeledHMC& hmc, std::size_t length);

// Merges states whose future word distributions agree within tol for all
// words up to the horizon, then splits until the quotient is well defined.
LabeledHMC minimize_unifilar(const LabeledHMC& hmc, std::size_t horizon, double tol);

// Shannon entropy in bits of a (not necessarily normalized) probability list.
double shannon_entropy(std::span<const double> p);
inline double plogp(double p) {
  return p > 0.0 ? p * std::log2(p) : 0.0;
}

}  // namespace qssp
