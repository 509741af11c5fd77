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

#include "qssp/msp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "qssp/random.hpp"

namespace qssp {

Evolution evolve_mixed_state(const LabeledHMC& hmc, std::span<const double> eta, std::size_t x) {
  if (x >= hmc.alphabet_size())
    throw Error(ErrorCode::UnknownSymbol, "symbol index out of range", std::to_string(x));
  Vector next = left_multiply(eta, hmc.labeled(x));
  const double p = sum(next);
  if (!(p > 0.0))
    throw Error(ErrorCode::ZeroProbabilitySymbol, "symbol cannot follow this belief",
                hmc.alphabet()[x]);
  for (double& v : next) v /= p;
  return {std::move(next), p};
}

std::string_view to_string(MspKind kind) {
  switch (kind) {
    case MspKind::ExactFinite: return "exact-finite";
    case MspKind::TruncatedCountable: return "truncated-countable";
    case MspKind::Sampled: return "sampled";
  }
  return "unknown";
}

std::string_view to_string(Cardinality c) {
  switch (c) {
    case Cardinality::Finite: return "finite";
    case Cardinality::Countable: return "countable";
    case Cardinality::Uncountable: return "uncountable";
  }
  return "unknown";
}

namespace {

constexpr std::size_t npos = MixedStatePresentation::npos;

double linf(std::span<const double> a, std::span<const double> b) { return max_abs_diff(a, b); }

// Hash grid over the leading belief coordinates with cell side equal to the merge tolerance.
class BeliefGrid {
 public:
  BeliefGrid(std::size_t n, double cell)
      : dims_(std::min<std::size_t>(n > 0 ? n - 1 : 0, 3)), cell_(std::max(cell, 1e-14)) {}

  void insert(std::span<const double> eta, std::size_t id) { cells_[key(cell_of(eta))].push_back(id); }

  // Closest stored belief within tol, ties to the lowest id.
  std::pair<std::size_t, double> find(std::span<const double> eta, double tol,
                                      const std::vector<Vector>& states) const {
    const auto base = cell_of(eta);
    std::size_t best = npos;
    double best_d = 0.0;
    std::size_t combos = 1;
    for (std::size_t d = 0; d < dims_; ++d) combos *= 3;
    for (std::size_t c = 0; c < combos; ++c) {
      std::array<std::int64_t, 3> cell = base;
      std::size_t code = c;
      for (std::size_t d = 0; d < dims_; ++d, code /= 3) cell[d] += static_cast<std::int64_t>(code % 3) - 1;
      auto it = cells_.find(key(cell));
      if (it == cells_.end()) continue;
      for (std::size_t id : it->second) {
        const double dist = linf(eta, states[id]);
        if (dist <= tol && (best == npos || dist < best_d || (dist == best_d && id < best))) {
          best = id;
          best_d = dist;
        }
      }
    }
    return {best, best_d};
  }

 private:
  std::array<std::int64_t, 3> cell_of(std::span<const double> eta) const {
    std::array<std::int64_t, 3> c{0, 0, 0};
    for (std::size_t d = 0; d < dims_; ++d) c[d] = static_cast<std::int64_t>(std::floor(eta[d] / cell_));
    return c;
  }
  static std::uint64_t key(const std::array<std::int64_t, 3>& c) {
    std::uint64_t h = 0;
    for (std::int64_t v : c) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
    return h;
  }

  std::size_t dims_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

// Nearest-neighbour search in L-infinity over a fixed set of beliefs.
class NearestIndex {
 public:
  NearestIndex(const std::vector<Vector>& states, const std::vector<std::size_t>& ids) : states_(states) {
    order_.reserve(ids.size());
    for (std::size_t id : ids) order_.emplace_back(states[id][0], id);
    std::sort(order_.begin(), order_.end());
  }

  std::size_t nearest(std::span<const double> eta) const {
    const auto pos = std::lower_bound(order_.begin(), order_.end(), std::make_pair(eta[0], std::size_t{0}));
    std::size_t best = npos;
    double best_d = 0.0;
    auto consider = [&](std::size_t id) {
      const double dist = linf(eta, states_[id]);
      if (best == npos || dist < best_d || (dist == best_d && id < best)) {
        best = id;
        best_d = dist;
      }
    };
    for (auto it = pos; it != order_.end(); ++it) {
      if (best != npos && it->first - eta[0] > best_d) break;
      consider(it->second);
    }
    for (auto it = pos; it != order_.begin();) {
      --it;
      if (best != npos && eta[0] - it->first > best_d) break;
      consider(it->second);
    }
    return best;
  }

 private:
  const std::vector<Vector>& states_;
  std::vector<std::pair<double, std::size_t>> order_;
};

// Strongly connected components (iterative Tarjan); returns component id per node.
std::vector<std::size_t> components(const MixedStatePresentation& m, std::size_t& count) {
  const std::size_t n = m.size(), k = m.alphabet_size();
  std::vector<std::size_t> index(n, npos), low(n, 0), comp(n, npos), stack;
  std::vector<bool> on_stack(n, false);
  std::size_t next_index = 0;
  count = 0;
  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != npos) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < k) {
        const std::size_t t = m.successor(f.node, f.edge++);
        if (t == npos) continue;
        if (index[t] == npos) {
          index[t] = low[t] = next_index++;
          stack.push_back(t);
          on_stack[t] = true;
          call.push_back({t, 0});
        } else if (on_stack[t]) {
          low[f.node] = std::min(low[f.node], index[t]);
        }
        continue;
      }
      const std::size_t v = f.node;
      if (low[v] == index[v]) {
        for (;;) {
          const std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
          if (w == v) break;
        }
        ++count;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
    }
  }
  return comp;
}

// Stationary distribution of one closed class by lazy power iteration on the sparse graph.
Vector class_stationary(const MixedStatePresentation& m, const std::vector<std::size_t>& members) {
  const std::size_t n = members.size(), k = m.alphabet_size();
  std::unordered_map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < n; ++i) local[members[i]] = i;
  Vector v(n, 1.0 / static_cast<double>(n)), w(n);
  const std::size_t edges = n * k + 1;
  const std::size_t cap = std::max<std::size_t>(1000, std::min<std::size_t>(1'000'000, 2'000'000'000 / edges));
  bool converged = false;
  for (std::size_t it = 0; it < cap && !converged; ++it) {
    for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 * v[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t x = 0; x < k; ++x) {
        const std::size_t t = m.successor(members[i], x);
        if (t != npos) w[local.at(t)] += 0.5 * v[i] * m.probability(members[i], x);
      }
    const double total = sum(w);
    for (double& x : w) x /= total;
    converged = max_abs_diff(v, w) < 1e-13;
    v.swap(w);
  }
  if (!converged && n <= 3000) {
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t x = 0; x < k; ++x) {
        const std::size_t t = m.successor(members[i], x);
        if (t != npos) p(i, local.at(t)) += m.probability(members[i], x);
      }
    Vector direct = stationary_direct(p);
    if (!direct.empty()) return direct;
  }
  return v;
}

void compute_stationary(MixedStatePresentation& m) {
  const std::size_t n = m.size(), k = m.alphabet_size();
  std::size_t count = 0;
  const auto comp = components(m, count);
  std::vector<bool> bottom(count, true);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t x = 0; x < k; ++x) {
      const std::size_t t = m.successor(s, x);
      if (t != npos && comp[t] != comp[s]) bottom[comp[s]] = false;
    }
  m.recurrent.assign(n, false);
  std::vector<std::vector<std::size_t>> classes(count);
  for (std::size_t s = 0; s < n; ++s)
    if (bottom[comp[s]]) {
      m.recurrent[s] = true;
      classes[comp[s]].push_back(s);
    }

  // Absorption weights from the start state for each closed class.
  std::vector<double> weight(count, 0.0);
  std::size_t closed_classes = 0;
  for (std::size_t c = 0; c < count; ++c) closed_classes += bottom[c] && !classes[c].empty();
  if (closed_classes == 1) {
    for (std::size_t c = 0; c < count; ++c)
      if (bottom[c] && !classes[c].empty()) weight[c] = 1.0;
  } else {
    Vector v(n, 0.0), w(n);
    v[0] = 1.0;
    for (std::size_t it = 0; it < 100'000; ++it) {
      double transient = 0.0;
      for (std::size_t s = 0; s < n; ++s)
        if (!m.recurrent[s]) transient += v[s];
      if (transient < 1e-15) break;
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        if (v[s] == 0.0) continue;
        if (m.recurrent[s]) {
          w[s] += v[s];
          continue;
        }
        for (std::size_t x = 0; x < k; ++x) {
          const std::size_t t = m.successor(s, x);
          if (t != npos) w[t] += v[s] * m.probability(s, x);
        }
      }
      v.swap(w);
    }
    for (std::size_t s = 0; s < n; ++s)
      if (m.recurrent[s]) weight[comp[s]] += v[s];
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    for (double& x : weight) x /= total;
  }

  m.stationary.assign(n, 0.0);
  for (std::size_t c = 0; c < count; ++c) {
    if (weight[c] <= 0.0 || classes[c].empty()) continue;
    const Vector mu = class_stationary(m, classes[c]);
    for (std::size_t i = 0; i < classes[c].size(); ++i) m.stationary[classes[c][i]] = weight[c] * mu[i];
  }
}

// Keeps the flagged states (in order) and redirects edges into dropped states.
MixedStatePresentation compact(const MixedStatePresentation& src, const std::vector<bool>& keep) {
  const std::size_t k = src.alphabet_size();
  std::vector<std::size_t> kept, remap(src.size(), npos);
  for (std::size_t s = 0; s < src.size(); ++s)
    if (keep[s]) {
      remap[s] = kept.size();
      kept.push_back(s);
    }
  const NearestIndex index(src.states, kept);
  MixedStatePresentation out;
  out.alphabet = src.alphabet;
  out.source_states = src.source_states;
  out.kind = src.kind;
  out.cardinality = src.cardinality;
  out.closed = src.closed;
  out.truncation_mass = src.truncation_mass;
  out.approximate_merges = src.approximate_merges;
  out.max_merge_distance = src.max_merge_distance;
  out.level_sizes = src.level_sizes;
  out.frontier_mass = src.frontier_mass;
  for (std::size_t s : kept) {
    out.states.push_back(src.states[s]);
    out.depth.push_back(src.depth[s]);
    for (std::size_t x = 0; x < k; ++x) {
      std::size_t t = src.successor(s, x);
      if (t != npos && remap[t] == npos) t = index.nearest(src.states[t]);
      out.successors.push_back(t == npos ? npos : remap[t]);
      out.probabilities.push_back(src.probability(s, x));
    }
  }
  compute_stationary(out);
  return out;
}

Cardinality diagnose(const std::vector<std::size_t>& levels) {
  // The deepest level was cut off by the state cap.
  std::vector<std::size_t> complete(levels.begin(), levels.end() - (levels.empty() ? 0 : 1));
  while (!complete.empty() && complete.back() == 0) complete.pop_back();
  const std::size_t take = std::min<std::size_t>(complete.size(), 6);
  if (take < 3) return Cardinality::Uncountable;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = complete.size() - take; i < complete.size(); ++i) {
    const double x = static_cast<double>(i);
    const double y = std::log(std::max<double>(1.0, static_cast<double>(complete[i])));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double t = static_cast<double>(take);
  const double slope = (t * sxy - sx * sy) / (t * sxx - sx * sx);
  return slope > std::log(1.25) ? Cardinality::Uncountable : Cardinality::Countable;
}

}  // namespace

double MixedStatePresentation::word_probability(const Word& word) const {
  double p = 1.0;
  std::size_t s = 0;
  for (std::size_t x : word) {
    if (x >= alphabet_size()) throw Error(ErrorCode::UnknownSymbol, "symbol index out of range");
    const std::size_t t = successor(s, x);
    if (t == npos) return 0.0;
    p *= probability(s, x);
    s = t;
  }
  return p;
}

namespace {

LabeledHMC as_hmc(const MixedStatePresentation& m, const std::vector<std::size_t>& members) {
  const std::size_t n = members.size(), k = m.alphabet_size();
  std::unordered_map<std::size_t, std::size_t> local;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    local[members[i]] = i;
    names.push_back("m" + std::to_string(members[i]));
  }
  std::vector<Matrix> labeled(k, Matrix(n, n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t x = 0; x < k; ++x) {
      const std::size_t t = m.successor(members[i], x);
      if (t == npos) continue;
      auto it = local.find(t);
      if (it != local.end()) labeled[x](i, it->second) += m.probability(members[i], x);
    }
  return LabeledHMC(std::move(names), m.alphabet, std::move(labeled));
}

}  // namespace

LabeledHMC MixedStatePresentation::to_hmc() const {
  std::vector<std::size_t> all(size());
  std::iota(all.begin(), all.end(), 0);
  return as_hmc(*this, all);
}

LabeledHMC MixedStatePresentation::recurrent_hmc() const {
  std::vector<std::size_t> members;
  for (std::size_t s = 0; s < size(); ++s)
    if (recurrent[s]) members.push_back(s);
  return as_hmc(*this, members);
}

MixedStatePresentation build_msp(const LabeledHMC& hmc, const MspOptions& options) {
  const std::size_t n = hmc.num_states(), k = hmc.alphabet_size();
  const double exact_tol = std::min(kExactMergeDistance, options.merge_tol);
  const std::size_t cap = std::max<std::size_t>(1, options.max_states);

  MixedStatePresentation m;
  m.alphabet = hmc.alphabet();
  m.source_states = hmc.states();
  BeliefGrid grid(n, options.merge_tol);
  m.states.push_back(hmc.stationary());
  m.depth.push_back(0);
  grid.insert(m.states[0], 0);
  // Probability of reaching each state along breadth-first tree paths.
  std::vector<double> reach{1.0};
  std::vector<double> frontier(1, 0.0);

  struct Overflow {
    std::size_t slot;
    Vector belief;
  };
  std::vector<Overflow> overflow;
  Vector next(n);
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    double total = 0.0;
    for (std::size_t x = 0; x < k; ++x) {
      const Vector& eta = m.states[i];
      std::fill(next.begin(), next.end(), 0.0);
      const Matrix& t = hmc.labeled(x);
      for (std::size_t s = 0; s < n; ++s) {
        if (eta[s] == 0.0) continue;
        for (std::size_t u = 0; u < n; ++u) next[u] += eta[s] * t(s, u);
      }
      const double p = sum(next);
      if (!(p > kZeroProbability)) {
        m.successors.push_back(npos);
        m.probabilities.push_back(0.0);
        continue;
      }
      for (double& v : next) v /= p;
      total += p;
      m.probabilities.push_back(p);
      const auto [id, dist] = grid.find(next, options.merge_tol, m.states);
      const std::size_t d = m.depth[i] + 1;
      const double flow = reach[i] * p;
      if (id != npos) {
        if (dist > exact_tol) {
          ++m.approximate_merges;
          m.max_merge_distance = std::max(m.max_merge_distance, dist);
        }
        m.successors.push_back(id);
        if (m.depth[id] == d) reach[id] += flow;
      } else if (m.states.size() < cap) {
        m.successors.push_back(m.states.size());
        grid.insert(next, m.states.size());
        m.depth.push_back(d);
        m.states.push_back(next);
        reach.push_back(flow);
      } else {
        m.successors.push_back(npos);
        overflow.push_back({m.successors.size() - 1, next});
        if (frontier.size() <= d) frontier.resize(d + 1, 0.0);
        frontier[d] += flow;
      }
    }
    for (std::size_t x = 0; x < k; ++x) m.probabilities[i * k + x] /= total;
  }

  m.closed = overflow.empty();
  const std::size_t max_depth = *std::max_element(m.depth.begin(), m.depth.end());
  m.level_sizes.assign(max_depth + 1, 0);
  for (std::size_t d : m.depth) ++m.level_sizes[d];
  frontier.resize(max_depth + 1, 0.0);
  for (std::size_t s = 0; s < m.size(); ++s) frontier[m.depth[s]] += reach[s];
  m.frontier_mass = std::move(frontier);

  if (!m.closed) {
    std::vector<std::size_t> all(m.size());
    std::iota(all.begin(), all.end(), 0);
    const NearestIndex index(m.states, all);
    for (const auto& o : overflow) m.successors[o.slot] = index.nearest(o.belief);
  }
  compute_stationary(m);

  if (m.closed) {
    m.kind = m.approximate_merges == 0 ? MspKind::ExactFinite : MspKind::TruncatedCountable;
    m.cardinality = m.approximate_merges == 0 ? Cardinality::Finite : Cardinality::Countable;
    return m;
  }

  std::vector<std::uint8_t> overflowed(m.size() * k, 0);
  for (const auto& o : overflow) overflowed[o.slot] = 1;
  for (std::size_t slot = 0; slot < overflowed.size(); ++slot)
    if (overflowed[slot]) m.truncation_mass += m.stationary[slot / k] * m.probabilities[slot];

  // Unifilar source: only the transient can overflow.
  m.cardinality = unifilarity(hmc).unifilar ? Cardinality::Countable : diagnose(m.level_sizes);
  m.kind = m.cardinality == Cardinality::Uncountable ? MspKind::Sampled : MspKind::TruncatedCountable;

  // Retain recurrent states by decreasing mass until the discarded tail is below threshold.
  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < m.size(); ++s)
    if (m.recurrent[s]) order.push_back(s);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return m.stationary[a] > m.stationary[b]; });
  std::vector<bool> keep(m.size(), true);
  double tail = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it == 0 || tail + m.stationary[*it] >= options.mass_threshold) break;
    tail += m.stationary[*it];
    keep[*it] = false;
  }
  if (tail > 0.0) {
    m.truncation_mass += tail;
    m = compact(m, keep);
  }
  return m;
}

MixedStatePresentation truncate_msp(const MixedStatePresentation& msp, std::size_t n) {
  std::vector<std::size_t> order(msp.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return msp.stationary[a] > msp.stationary[b]; });
  std::vector<bool> keep(msp.size(), false);
  for (std::size_t i = 0; i < std::min(std::max<std::size_t>(n, 1), msp.size()); ++i) keep[order[i]] = true;
  MixedStatePresentation out = compact(msp, keep);
  if (out.size() < msp.size()) {
    for (std::size_t s = 0; s < msp.size(); ++s)
      if (!keep[s]) out.truncation_mass += msp.stationary[s];
    if (out.kind == MspKind::ExactFinite) out.kind = MspKind::TruncatedCountable;
  }
  return out;
}

namespace {

// Class masses of the coarsest partition compatible with emissions and successors.
std::vector<double> causal_masses(const MixedStatePresentation& m) {
  const std::size_t k = m.alphabet_size();
  std::vector<std::size_t> members;
  for (std::size_t s = 0; s < m.size(); ++s)
    if (m.recurrent[s]) members.push_back(s);
  auto emission_less = [&](std::size_t a, std::size_t b) {
    for (std::size_t x = 0; x < k; ++x)
      if (m.probability(a, x) != m.probability(b, x)) return m.probability(a, x) < m.probability(b, x);
    return a < b;
  };
  std::vector<std::size_t> sorted = members;
  std::sort(sorted.begin(), sorted.end(), emission_less);
  std::unordered_map<std::size_t, std::size_t> cls;
  std::size_t lead = npos, next_class = 0;
  for (std::size_t s : sorted) {
    bool same = lead != npos;
    for (std::size_t x = 0; x < k && same; ++x)
      same = std::abs(m.probability(s, x) - m.probability(lead, x)) <= 1e-12;
    if (!same) {
      lead = s;
      ++next_class;
    }
    cls[s] = next_class - 1;
  }
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> signatures;
    std::unordered_map<std::size_t, std::size_t> refined;
    for (std::size_t s : members) {
      std::vector<std::size_t> sig{cls[s]};
      for (std::size_t x = 0; x < k; ++x) {
        const std::size_t t = m.successor(s, x);
        sig.push_back(t == npos || m.probability(s, x) == 0.0 ? npos : cls.at(t));
      }
      refined[s] = signatures.try_emplace(std::move(sig), signatures.size()).first->second;
    }
    const bool stable = signatures.size() == next_class;
    next_class = signatures.size();
    cls.swap(refined);
    if (stable) break;
  }
  std::vector<double> mass(next_class, 0.0);
  for (std::size_t s : members) mass[cls[s]] += m.stationary[s];
  return mass;
}

MspMetrics metrics_of(const MixedStatePresentation& m) {
  MspMetrics out;
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (!m.recurrent[s]) continue;
    ++out.recurrent_states;
    double h = 0.0;
    for (std::size_t x = 0; x < m.alphabet_size(); ++x) h -= plogp(m.probability(s, x));
    out.hmu += m.stationary[s] * h;
  }
  out.cmu = shannon_entropy(causal_masses(m));
  return out;
}

}  // namespace

MspMetrics msp_metrics(const MixedStatePresentation& msp, std::vector<std::size_t> series_sizes) {
  if (msp.kind == MspKind::Sampled)
    throw Error(ErrorCode::SampledKindUnsupported,
                "presentation is uncountable; use the Blackwell estimator");
  MspMetrics out = metrics_of(msp);
  if (series_sizes.empty() && msp.kind != MspKind::TruncatedCountable) return out;
  if (series_sizes.empty()) {
    for (std::size_t v : {1, 2, 3, 4, 5, 10, 15, 20, 25, 30, 40, 50, 75, 100, 150, 200, 300, 400, 500,
                          750, 1000, 2000, 5000, 10000})
      if (v < msp.size()) series_sizes.push_back(v);
    series_sizes.push_back(msp.size());
  }
  for (std::size_t n : series_sizes) {
    const MspMetrics t = metrics_of(truncate_msp(msp, n));
    out.series.push_back({std::min(n, msp.size()), t.hmu, t.cmu});
  }
  return out;
}

void walk_blackwell(const LabeledHMC& hmc, std::size_t length, std::size_t burn_in, std::uint64_t seed,
                    const BeliefVisitor& visit) {
  const std::size_t n = hmc.num_states(), k = hmc.alphabet_size();
  Rng rng(seed);
  Vector eta = hmc.stationary(), next(n), probs(k);
  for (std::size_t t = 0; t < burn_in + length; ++t) {
    double total = 0.0;
    for (std::size_t x = 0; x < k; ++x) {
      double p = 0.0;
      for (std::size_t s = 0; s < n; ++s) p += eta[s] * hmc.emission_probability(s, x);
      probs[x] = p;
      total += p;
    }
    for (double& p : probs) p /= total;
    const double u = rng.uniform();
    std::size_t x = 0;
    double acc = 0.0;
    std::size_t last_possible = 0;
    for (; x < k; ++x) {
      if (probs[x] > 0.0) last_possible = x;
      acc += probs[x];
      if (u < acc && probs[x] > 0.0) break;
    }
    if (x == k) x = last_possible;
    if (t >= burn_in) visit(eta, probs, x);
    std::fill(next.begin(), next.end(), 0.0);
    const Matrix& tx = hmc.labeled(x);
    for (std::size_t s = 0; s < n; ++s) {
      if (eta[s] == 0.0) continue;
      for (std::size_t v = 0; v < n; ++v) next[v] += eta[s] * tx(s, v);
    }
    const double z = sum(next);
    for (std::size_t v = 0; v < n; ++v) eta[v] = next[v] / z;
  }
}

BeliefTrajectory sample_blackwell(const LabeledHMC& hmc, std::size_t length, std::size_t burn_in,
                                  std::uint64_t seed) {
  BeliefTrajectory out;
  out.dimension = hmc.num_states();
  out.beliefs.reserve(length * out.dimension);
  out.symbols.reserve(length);
  walk_blackwell(hmc, length, burn_in, seed,
                 [&](std::span<const double> eta, std::span<const double>, std::size_t x) {
                   out.beliefs.insert(out.beliefs.end(), eta.begin(), eta.end());
                   out.symbols.push_back(x);
                 });
  return out;
}

}  // namespace qssp
