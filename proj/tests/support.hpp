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

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qssp/hmc.hpp"
#include "qssp/io.hpp"
#include "qssp/measured.hpp"
#include "qssp/msp.hpp"
#include "qssp/quantum.hpp"
#include "qssp/random.hpp"

namespace qssp::testing {

inline constexpr double kPi = std::numbers::pi;

inline std::string model_path(const std::string& name) {
  return std::string(QSSP_MODEL_DIR) + "/" + name + ".json";
}

inline Model load(const std::string& name) { return load_model(model_path(name)); }

inline double binary_entropy(double p) { return -plogp(p) - plogp(1.0 - p); }

inline LabeledHMC golden_mean() {
  Matrix t0(2, 2), t1(2, 2);
  t0(0, 1) = 0.5;
  t1(0, 0) = 0.5;
  t1(1, 0) = 1.0;
  return LabeledHMC({"A", "B"}, {"0", "1"}, {t0, t1});
}

inline LabeledHMC biased_coin(double p0) {
  Matrix t0(1, 1, p0), t1(1, 1, 1.0 - p0);
  return LabeledHMC({"A"}, {"0", "1"}, {t0, t1});
}

// Measured machine of the nonorthogonal Golden Mean source in the |+>,|-> basis.
inline LabeledHMC countable_chain_machine() {
  Matrix t0(2, 2), t1(2, 2);
  t0(0, 0) = 0.5;
  t0(0, 1) = 0.25;
  t0(1, 0) = 1.0;
  t1(0, 1) = 0.25;
  return LabeledHMC({"A", "B"}, {"0", "1"}, {t0, t1});
}

inline Vector random_weights(Rng& rng, std::size_t n) {
  Vector w(n);
  double s = 0.0;
  for (double& v : w) s += (v = 0.05 + rng.uniform());
  for (double& v : w) v /= s;
  return w;
}

inline std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n; }

// Strongly connected by a ring 0 -> 1 -> ... -> 0 plus random extra edges.
inline LabeledHMC random_hmc(Rng& rng, std::size_t n, std::size_t k, std::size_t extra_per_state = 2) {
  std::vector<Matrix> t(k, Matrix(n, n));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::pair<std::size_t, std::size_t>> edges{{pick(rng, k), (s + 1) % n}};
    for (std::size_t e = 0; e < extra_per_state; ++e) edges.emplace_back(pick(rng, k), pick(rng, n));
    const Vector w = random_weights(rng, edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) t[edges[e].first](s, edges[e].second) += w[e];
  }
  std::vector<std::string> states, alphabet;
  for (std::size_t s = 0; s < n; ++s) states.push_back("s" + std::to_string(s));
  for (std::size_t x = 0; x < k; ++x) alphabet.push_back("x" + std::to_string(x));
  return LabeledHMC(states, alphabet, t);
}

// Each (state, symbol) has at most one successor; the ring keeps it irreducible.
inline LabeledHMC random_unifilar(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<Matrix> t(k, Matrix(n, n));
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t ring_symbol = pick(rng, k);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t x = 0; x < k; ++x) {
      if (x == ring_symbol) edges.emplace_back(x, (s + 1) % n);
      else if (rng.uniform() < 0.7) edges.emplace_back(x, pick(rng, n));
    }
    const Vector w = random_weights(rng, edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) t[edges[e].first](s, edges[e].second) = w[e];
  }
  std::vector<std::string> states, alphabet;
  for (std::size_t s = 0; s < n; ++s) states.push_back("s" + std::to_string(s));
  for (std::size_t x = 0; x < k; ++x) alphabet.push_back("x" + std::to_string(x));
  return LabeledHMC(states, alphabet, t);
}

// Guaranteed nonunifilar: state 0 branches on symbol 0 to two successors.
inline LabeledHMC random_nonunifilar(Rng& rng, std::size_t n, std::size_t k) {
  for (;;) {
    LabeledHMC h = random_hmc(rng, n, k, 2);
    if (!unifilarity(h).unifilar) return h;
  }
}

// Splits state s into two copies sharing its outgoing rows; every transition into s lands on
// the first copy with weight w. Same process, nonunifilar presentation.
inline LabeledHMC split_state(const LabeledHMC& h, std::size_t s, double w) {
  const std::size_t n = h.num_states(), k = h.alphabet_size();
  std::vector<Matrix> t(k, Matrix(n + 1, n + 1));
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t i = 0; i <= n; ++i) {
      const std::size_t src = i == n ? s : i;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = h.labeled(x)(src, j);
        if (j == s) {
          t[x](i, j) = w * v;
          t[x](i, n) = (1.0 - w) * v;
        } else {
          t[x](i, j) = v;
        }
      }
    }
  std::vector<std::string> states = h.states();
  states.push_back(h.states()[s] + "'");
  return LabeledHMC(states, h.alphabet(), t);
}

// Nonunifilar machine whose mixed-state presentation is exact-finite.
inline LabeledHMC random_split_finite(Rng& rng, std::size_t n, std::size_t k) {
  for (;;) {
    const LabeledHMC h = random_unifilar(rng, n, k);
    if (build_msp(h).kind != MspKind::ExactFinite) continue;
    return split_state(h, pick(rng, n), 0.2 + 0.6 * rng.uniform());
  }
}

inline QubitPureState random_qubit(Rng& rng) {
  return qubit_from_bloch(std::acos(1.0 - 2.0 * rng.uniform()), 2.0 * kPi * rng.uniform());
}

// Dense Eigen solve of pi (T - I) = 0 with sum(pi) = 1, independent of the library solver.
inline Vector eigen_stationary(const Matrix& t) {
  const auto n = static_cast<Eigen::Index>(t.rows());
  Eigen::MatrixXd a(n + 1, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(j, i) = t(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - (i == j ? 1.0 : 0.0);
  a.row(n).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b(n) = 1.0;
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  return Vector(x.data(), x.data() + n);
}

// Sum over hidden-state paths, no matrix products.
inline double path_sum_probability(const LabeledHMC& h, const Vector& pi, const Word& w) {
  const std::size_t n = h.num_states();
  double total = 0.0;
  std::vector<std::size_t> path(w.size() + 1, 0);
  for (;;) {
    double p = pi[path[0]];
    for (std::size_t t = 0; t < w.size() && p != 0.0; ++t) p *= h.labeled(w[t])(path[t], path[t + 1]);
    total += p;
    std::size_t i = 0;
    while (i < path.size() && ++path[i] == n) path[i++] = 0;
    if (i == path.size()) break;
  }
  return total;
}

inline std::vector<Word> all_words(std::size_t k, std::size_t length) {
  std::vector<Word> out{{}};
  for (std::size_t l = 0; l < length; ++l) {
    std::vector<Word> next;
    for (const auto& w : out)
      for (std::size_t x = 0; x < k; ++x) {
        Word v = w;
        v.push_back(x);
        next.push_back(std::move(v));
      }
    out.swap(next);
  }
  return out;
}

}  // namespace qssp::testing
