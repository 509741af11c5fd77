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

#include "qssp/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "qssp/random.hpp"

namespace qssp {

namespace {

class BatchMeans {
 public:
  explicit BatchMeans(std::size_t length) : batch_(std::max<std::size_t>(1, length / kBatchCount)) {}

  void add(double v) {
    total_ += v;
    ++count_;
    current_ += v;
    if (++in_batch_ == batch_ && means_.size() < kBatchCount) {
      means_.push_back(current_ / static_cast<double>(batch_));
      current_ = 0.0;
      in_batch_ = 0;
    }
  }

  EntropyRateEstimate result() const {
    EntropyRateEstimate e;
    e.length = count_;
    e.hmu = count_ ? total_ / static_cast<double>(count_) : 0.0;
    double se = 0.0;
    if (means_.size() > 1) {
      double mean = 0.0;
      for (double m : means_) mean += m;
      mean /= static_cast<double>(means_.size());
      double var = 0.0;
      for (double m : means_) var += (m - mean) * (m - mean);
      var /= static_cast<double>(means_.size() - 1);
      se = std::sqrt(var / static_cast<double>(means_.size()));
    }
    e.standard_error = std::max(se, std::numeric_limits<double>::epsilon());
    return e;
  }

 private:
  std::size_t batch_;
  std::size_t in_batch_ = 0;
  std::size_t count_ = 0;
  double current_ = 0.0;
  double total_ = 0.0;
  std::vector<double> means_;
};

double symbol_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) h -= plogp(p);
  return h;
}

}  // namespace

EntropyRateEstimate blackwell_entropy_rate(const LabeledHMC& hmc, std::size_t length,
                                           std::size_t burn_in, std::uint64_t seed) {
  BatchMeans acc(length);
  walk_blackwell(hmc, length, burn_in, seed,
                 [&](std::span<const double>, std::span<const double> probs, std::size_t) {
                   acc.add(symbol_entropy(probs));
                 });
  return acc.result();
}

double coarse_grained_entropy(std::span<const double> points, std::size_t dimension, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (dimension == 0 || points.empty()) throw Error(ErrorCode::InvalidArgument, "no points");
  const std::size_t count = points.size() / dimension;
  const std::size_t coords = dimension - 1;
  if (coords == 0) return 0.0;
  const auto top = static_cast<std::uint64_t>(std::ceil(1.0 / epsilon)) - 1;
  const unsigned bits = std::max(1, static_cast<int>(std::bit_width(top)));
  const bool packed = bits * coords <= 64;

  std::vector<std::uint64_t> keys(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t key = 0;
    for (std::size_t d = 0; d < coords; ++d) {
      const double c = points[i * dimension + d];
      std::uint64_t idx = c <= 0.0 ? 0 : static_cast<std::uint64_t>(std::floor(c / epsilon));
      idx = std::min(idx, top);
      key = packed ? (key << bits) | idx : splitmix64(key ^ idx);
    }
    keys[i] = key;
  }
  std::sort(keys.begin(), keys.end());
  double h = 0.0;
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < count;) {
    std::size_t j = i;
    while (j < count && keys[j] == keys[i]) ++j;
    h -= plogp(static_cast<double>(j - i) / n);
    i = j;
  }
  return h;
}

std::vector<double> eps_grid(double eps_max, double eps_min, std::size_t points) {
  if (points < 2 || !(eps_max > eps_min) || !(eps_min > 0.0))
    throw Error(ErrorCode::InvalidArgument, "epsilon grid needs eps_max > eps_min > 0 and two points");
  std::vector<double> out(points);
  const double hi = std::log2(eps_max), lo = std::log2(eps_min);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = std::exp2(hi + (lo - hi) * static_cast<double>(i) / static_cast<double>(points - 1));
  return out;
}

DimensionFit fit_dimension(std::span<const double> eps, std::span<const double> entropies,
                           double max_dimension) {
  const std::size_t n = eps.size();
  if (n < 6 || entropies.size() != n)
    throw Error(ErrorCode::InvalidArgument, "dimension fit needs at least six scales");
  DimensionFit fit;
  fit.eps.assign(eps.begin(), eps.end());
  fit.entropies.assign(entropies.begin(), entropies.end());
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::log2(1.0 / eps[i]);

  bool have = false;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + kMinFitPoints - 1; b < n; ++b) {
      const double m = static_cast<double>(b - a + 1);
      double sx = 0, sy = 0;
      for (std::size_t i = a; i <= b; ++i) sx += x[i], sy += entropies[i];
      const double mx = sx / m, my = sy / m;
      double sxx = 0, sxy = 0, syy = 0;
      for (std::size_t i = a; i <= b; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (entropies[i] - my);
        syy += (entropies[i] - my) * (entropies[i] - my);
      }
      const double slope = sxy / sxx;
      double r2 = 1.0;
      if (syy > 1e-24) r2 = std::clamp(1.0 - (syy - slope * sxy) / syy, 0.0, 1.0);
      const bool better = !have || r2 > fit.r2 + 1e-12 ||
                          (std::abs(r2 - fit.r2) <= 1e-12 && b - a > fit.last - fit.first);
      if (better) {
        have = true;
        fit.r2 = r2;
        fit.slope = syy > 1e-24 ? slope : 0.0;
        fit.intercept = my - fit.slope * mx;
        fit.first = a;
        fit.last = b;
      }
    }
  fit.dmu = std::clamp(fit.slope, 0.0, max_dimension);
  if (fit.r2 < kMinFitR2) fit.error = ErrorCode::InsufficientLinearRegime;
  return fit;
}

DimensionFit dimension_from_points(std::span<const double> points, std::size_t dimension,
                                   std::span<const double> eps) {
  std::vector<double> h;
  h.reserve(eps.size());
  for (double e : eps) h.push_back(coarse_grained_entropy(points, dimension, e));
  DimensionFit fit = fit_dimension(eps, h, static_cast<double>(dimension) - 1.0);
  fit.sample = points.size() / dimension;
  return fit;
}

DimensionFit statistical_complexity_dimension(const LabeledHMC& hmc, std::size_t sample,
                                              std::span<const double> eps, std::uint64_t seed,
                                              std::size_t burn_in) {
  return sampled_estimates(hmc, sample, sample, burn_in, seed, eps).dmu;
}

SampledEstimates sampled_estimates(const LabeledHMC& hmc, std::size_t length, std::size_t sample,
                                   std::size_t burn_in, std::uint64_t seed, std::span<const double> eps,
                                   bool want_dimension) {
  if (!want_dimension) sample = 0;
  if (want_dimension && sample == 0) throw Error(ErrorCode::InvalidArgument, "sample must be positive");
  if (want_dimension && eps.size() < 6)
    throw Error(ErrorCode::InvalidArgument, "dimension fit needs at least six scales");
  const std::size_t n = hmc.num_states();
  BatchMeans acc(length);
  std::vector<double> points;
  points.reserve(sample * n);
  std::size_t t = 0;
  walk_blackwell(hmc, std::max(length, sample), burn_in, seed,
                 [&](std::span<const double> eta, std::span<const double> probs, std::size_t) {
                   if (t < length) acc.add(symbol_entropy(probs));
                   if (t < sample) points.insert(points.end(), eta.begin(), eta.end());
                   ++t;
                 });
  SampledEstimates out;
  out.hmu = acc.result();
  if (want_dimension) out.dmu = dimension_from_points(points, n, eps);
  return out;
}

MetricsReport compute_metrics(const LabeledHMC& hmc, const MetricsConfig& config) {
  validate(hmc).throw_if_invalid();
  MetricsReport r;
  r.seed = config.seed;
  r.burn_in = config.burn_in;
  if (unifilarity(hmc).unifilar) {
    r.hmu = entropy_rate_unifilar(hmc);
    r.hmu_method = "closed-form";
    r.cmu = state_entropy(minimize_unifilar(hmc, hmc.num_states(), 1e-12));
    r.cardinality = Cardinality::Finite;
    return r;
  }
  const MixedStatePresentation msp = build_msp(hmc, config.msp);
  r.msp_kind = msp.kind;
  r.msp_states = msp.size();
  r.msp_leak = msp.truncation_mass;
  r.cardinality = msp.cardinality;
  if (msp.kind != MspKind::Sampled) {
    const MspMetrics m = msp_metrics(msp);
    r.hmu = m.hmu;
    r.hmu_method = "msp";
    r.cmu = m.cmu;
    r.series = m.series;
    return r;
  }
  const SampledEstimates s =
      sampled_estimates(hmc, config.length, config.sample, config.burn_in, config.seed, config.eps);
  r.hmu = s.hmu.hmu;
  r.hmu_stderr = s.hmu.standard_error;
  r.hmu_method = "blackwell";
  r.dmu = s.dmu.dmu;
  r.dmu_fit = s.dmu;
  r.sample_size = std::max(config.length, config.sample);
  return r;
}

}  // namespace qssp
