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

#include "qssp/hmc.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "qssp/random.hpp"

namespace qssp {

struct LabeledHMC::StationaryCache {
  std::once_flag once;
  Vector value;
  std::exception_ptr error;
};

LabeledHMC::LabeledHMC(std::vector<std::string> states, std::vector<std::string> alphabet,
                       std::vector<Matrix> labeled)
    : states_(std::move(states)),
      alphabet_(std::move(alphabet)),
      labeled_(std::move(labeled)),
      cache_(std::make_shared<StationaryCache>()) {
  const std::size_t n = states_.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "machine has no states");
  if (alphabet_.empty()) throw Error(ErrorCode::InvalidArgument, "machine has no symbols");
  if (labeled_.size() != alphabet_.size())
    throw Error(ErrorCode::InvalidArgument, "one labeled matrix per symbol is required");
  internal_ = Matrix(n, n);
  emission_ = Matrix(n, alphabet_.size());
  for (std::size_t x = 0; x < labeled_.size(); ++x) {
    const Matrix& t = labeled_[x];
    if (t.rows() != n || t.cols() != n)
      throw Error(ErrorCode::InvalidArgument, "labeled matrix has wrong shape", "symbol " + alphabet_[x]);
    internal_ += t;
    for (std::size_t s = 0; s < n; ++s) emission_(s, x) = sum(t.row(s));
  }
}

std::optional<std::size_t> LabeledHMC::state_index(const std::string& name) const {
  auto it = std::find(states_.begin(), states_.end(), name);
  if (it == states_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::optional<std::size_t> LabeledHMC::symbol_index(const std::string& name) const {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), name);
  if (it == alphabet_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - alphabet_.begin());
}

const Vector& LabeledHMC::stationary() const {
  std::call_once(cache_->once, [this] {
    try {
      cache_->value = stationary_distribution(*this);
    } catch (...) {
      cache_->error = std::current_exception();
    }
  });
  if (cache_->error) std::rethrow_exception(cache_->error);
  return cache_->value;
}

void ValidationResult::throw_if_invalid() const {
  if (!ok) throw Error(code.value_or(ErrorCode::InvalidArgument), message, location);
}

namespace {

// Forward reachability on the support graph of m.
std::vector<bool> reachable(const Matrix& m, std::size_t start, bool transpose) {
  const std::size_t n = m.rows();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t s = stack.back();
    stack.pop_back();
    for (std::size_t t = 0; t < n; ++t) {
      const double w = transpose ? m(t, s) : m(s, t);
      if (w > kZeroProbability && !seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

ValidationResult failure(ErrorCode code, std::string message, std::string location) {
  return {false, code, std::move(message), std::move(location)};
}

}  // namespace

ValidationResult validate(const LabeledHMC& hmc) {
  const std::size_t n = hmc.num_states();
  for (std::size_t x = 0; x < hmc.alphabet_size(); ++x) {
    const Matrix& t = hmc.labeled(x);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t u = 0; u < n; ++u)
        if (!(t(s, u) >= 0.0))
          return failure(ErrorCode::NegativeEntry, "transition probability is negative",
                         "from " + hmc.states()[s] + ", symbol " + hmc.alphabet()[x] + ", to " +
                             hmc.states()[u]);
  }
  for (std::size_t s = 0; s < n; ++s) {
    const double total = sum(hmc.internal().row(s));
    if (std::abs(total - 1.0) > kRowSumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "outgoing probabilities sum to " << total;
      return failure(ErrorCode::NonStochasticRow, msg.str(), "state " + hmc.states()[s]);
    }
  }
  const auto fwd = reachable(hmc.internal(), 0, false);
  const auto bwd = reachable(hmc.internal(), 0, true);
  for (std::size_t s = 0; s < n; ++s)
    if (!fwd[s] || !bwd[s])
      return failure(ErrorCode::ReducibleChain, "internal chain is not strongly connected",
                     "state " + hmc.states()[s]);
  return {};
}

Vector stationary_of(const Matrix& transition, const StationaryOptions& options) {
  const std::size_t n = transition.rows();
  // Lazy chain (I + T)/2 shares the fixed point and is aperiodic.
  Vector pi(n, 1.0 / static_cast<double>(n));
  Vector next(n);
  bool converged = false;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    Vector step = left_multiply(pi, transition);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = 0.5 * (pi[i] + step[i]);
      total += next[i];
    }
    for (double& v : next) v /= total;
    const double delta = max_abs_diff(pi, next);
    pi.swap(next);
    if (delta < options.tolerance) {
      converged = true;
      break;
    }
  }
  auto residual = [&](const Vector& v) { return max_abs_diff(left_multiply(v, transition), v); };
  if (converged && residual(pi) < 1e-10) return pi;
  Vector direct = stationary_direct(transition);
  if (!direct.empty() && residual(direct) < 1e-10) return direct;
  throw Error(ErrorCode::ConvergenceFailure, "stationary distribution did not converge");
}

Vector stationary_distribution(const LabeledHMC& hmc, const StationaryOptions& options) {
  return stationary_of(hmc.internal(), options);
}

UnifilarityReport unifilarity(const LabeledHMC& hmc) {
  UnifilarityReport report;
  const std::size_t n = hmc.num_states();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t x = 0; x < hmc.alphabet_size(); ++x) {
      std::vector<std::size_t> succ;
      for (std::size_t u = 0; u < n; ++u)
        if (hmc.labeled(x)(s, u) > kZeroProbability) succ.push_back(u);
      if (succ.size() > 1) report.witnesses.push_back({s, x, std::move(succ)});
    }
  report.unifilar = report.witnesses.empty();
  return report;
}

double word_probability(const LabeledHMC& hmc, const Vector& initial, const Word& word) {
  Vector v = initial;
  for (std::size_t x : word) {
    if (x >= hmc.alphabet_size())
      throw Error(ErrorCode::UnknownSymbol, "symbol index out of range", std::to_string(x));
    v = left_multiply(v, hmc.labeled(x));
  }
  return sum(v);
}

double word_probability(const LabeledHMC& hmc, const Word& word) {
  return word_probability(hmc, hmc.stationary(), word);
}

double word_probability(const LabeledHMC& hmc, const std::vector<std::string>& word) {
  return word_probability(hmc, parse_word(hmc, word));
}

Word parse_word(const LabeledHMC& hmc, const std::vector<std::string>& symbols) {
  Word w;
  w.reserve(symbols.size());
  for (const auto& s : symbols) {
    auto idx = hmc.symbol_index(s);
    if (!idx) throw Error(ErrorCode::UnknownSymbol, "symbol not in alphabet", s);
    w.push_back(*idx);
  }
  return w;
}

namespace {

std::size_t draw(std::span<const double> cumulative, double u) {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace

Word sample_sequence(const LabeledHMC& hmc, std::size_t length, std::uint64_t seed) {
  Word out;
  if (length == 0) return out;
  out.reserve(length);
  const std::size_t n = hmc.num_states();
  const std::size_t k = hmc.alphabet_size();
  // Per state, cumulative weights over (symbol, successor) pairs.
  std::vector<Vector> table(n, Vector(k * n));
  for (std::size_t s = 0; s < n; ++s) {
    double acc = 0.0;
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t u = 0; u < n; ++u) {
        acc += hmc.labeled(x)(s, u);
        table[s][x * n + u] = acc;
      }
  }
  Vector pi_cum(n);
  std::partial_sum(hmc.stationary().begin(), hmc.stationary().end(), pi_cum.begin());
  Rng rng(seed);
  std::size_t state = draw(pi_cum, rng.uniform());
  for (std::size_t t = 0; t < length; ++t) {
    const std::size_t pick = draw(table[state], rng.uniform());
    out.push_back(pick / n);
    state = pick % n;
  }
  return out;
}

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) h -= plogp(v);
  return h;
}

double transition_entropy(const LabeledHMC& hmc) {
  const Vector& pi = hmc.stationary();
  double h = 0.0;
  for (std::size_t s = 0; s < hmc.num_states(); ++s) {
    double local = 0.0;
    for (const Matrix& t : hmc.labeled_matrices())
      for (double v : t.row(s)) local -= plogp(v);
    h += pi[s] * local;
  }
  return h;
}

double entropy_rate_unifilar(const LabeledHMC& hmc) {
  if (!unifilarity(hmc).unifilar)
    throw Error(ErrorCode::NotUnifilar, "closed-form entropy rate requires a unifilar machine");
  return transition_entropy(hmc);
}

double state_entropy(const LabeledHMC& hmc) { return shannon_entropy(hmc.stationary()); }

double block_entropy(const LabeledHMC& hmc, std::size_t length) {
  const std::uint64_t k = hmc.alphabet_size();
  std::uint64_t words = 1;
  for (std::size_t i = 0; i < length; ++i) {
    words *= k;
    if (words > kMaxEnumeratedWords)
      throw Error(ErrorCode::BlockTooLarge, "too many words to enumerate",
                  "L=" + std::to_string(length));
  }
  double h = 0.0;
  std::function<void(const Vector&, std::size_t)> walk = [&](const Vector& v, std::size_t depth) {
    if (depth == length) {
      h -= plogp(sum(v));
      return;
    }
    for (std::size_t x = 0; x < k; ++x) {
      Vector next = left_multiply(v, hmc.labeled(x));
      if (sum(next) > 0.0) walk(next, depth + 1);
    }
  };
  walk(hmc.stationary(), 0);
  return h;
}

LabeledHMC minimize_unifilar(const LabeledHMC& hmc, std::size_t horizon, double tol) {
  if (!unifilarity(hmc).unifilar)
    throw Error(ErrorCode::NotUnifilar, "minimization requires a unifilar machine");
  const std::size_t n = hmc.num_states();
  const std::size_t k = hmc.alphabet_size();
  std::vector<std::size_t> successor(n * k, n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t u = 0; u < n; ++u)
        if (hmc.labeled(x)(s, u) > kZeroProbability) successor[s * k + x] = u;

  // Initial classes: emission vectors equal within tol (greedy, first member is representative).
  std::vector<std::size_t> cls(n);
  std::vector<std::size_t> reps;
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t c = 0;
    for (; c < reps.size(); ++c) {
      bool same = true;
      for (std::size_t x = 0; x < k && same; ++x)
        same = std::abs(hmc.emission_probability(s, x) - hmc.emission_probability(reps[c], x)) <= tol;
      if (same) break;
    }
    if (c == reps.size()) reps.push_back(s);
    cls[s] = c;
  }

  // Refined to stability, so merged states agree at every horizon, not only the requested one.
  static_cast<void>(horizon);
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> signatures;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> sig{cls[s]};
      for (std::size_t x = 0; x < k; ++x) {
        const std::size_t u = successor[s * k + x];
        sig.push_back(u == n ? n : cls[u]);
      }
      next[s] = signatures.try_emplace(std::move(sig), signatures.size()).first->second;
    }
    const std::size_t before = *std::max_element(cls.begin(), cls.end()) + 1;
    cls.swap(next);
    if (signatures.size() == before) break;
  }

  const std::size_t m = *std::max_element(cls.begin(), cls.end()) + 1;
  std::vector<std::size_t> rep(m, n);
  for (std::size_t s = 0; s < n; ++s)
    if (rep[cls[s]] == n) rep[cls[s]] = s;
  std::vector<std::string> names(m);
  for (std::size_t c = 0; c < m; ++c) names[c] = hmc.states()[rep[c]];
  std::vector<Matrix> labeled(k, Matrix(m, m));
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t u = 0; u < n; ++u) labeled[x](c, cls[u]) += hmc.labeled(x)(rep[c], u);
  return LabeledHMC(std::move(names), hmc.alphabet(), std::move(labeled));
}

}  // namespace qssp
