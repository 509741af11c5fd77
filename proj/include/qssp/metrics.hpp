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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qssp/hmc.hpp"
#include "qssp/msp.hpp"

namespace qssp {

struct EntropyRateEstimate {
  double hmu = 0.0;
  double standard_error = 0.0;
  std::size_t length = 0;
};

inline constexpr std::size_t kBatchCount = 100;

// Mean transition uncertainty along a belief trajectory; batch-means standard error.
EntropyRateEstimate blackwell_entropy_rate(const LabeledHMC& hmc, std::size_t length,
                                           std::size_t burn_in, std::uint64_t seed);

// Shannon entropy of the histogram of points (rows of `dimension` coordinates) on a grid
// of side epsilon over all coordinates but the last.
double coarse_grained_entropy(std::span<const double> points, std::size_t dimension, double epsilon);

// Log-spaced from eps_max down to eps_min.
std::vector<double> eps_grid(double eps_max = 0x1p-3, double eps_min = 0x1p-12, std::size_t points = 13);

struct DimensionFit {
  double dmu = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t first = 0;  // fit window, inclusive indices into eps
  std::size_t last = 0;
  std::vector<double> eps;
  std::vector<double> entropies;
  std::size_t sample = 0;
  std::optional<ErrorCode> error;  // InsufficientLinearRegime when r2 < 0.98
};

inline constexpr double kMinFitR2 = 0.98;
inline constexpr std::size_t kMinFitPoints = 4;

// Best-R^2 window of H_eps against log2(1/eps); slope clamped to [0, max_dimension].
DimensionFit fit_dimension(std::span<const double> eps, std::span<const double> entropies,
                           double max_dimension);

DimensionFit dimension_from_points(std::span<const double> points, std::size_t dimension,
                                   std::span<const double> eps);

DimensionFit statistical_complexity_dimension(const LabeledHMC& hmc, std::size_t sample,
                                              std::span<const double> eps, std::uint64_t seed,
                                              std::size_t burn_in = 10'000);

struct MetricsConfig {
  std::size_t length = 1'000'000;
  std::size_t burn_in = 10'000;
  std::size_t sample = 2'000'000;
  std::uint64_t seed = 0;
  MspOptions msp;
  std::vector<double> eps = eps_grid();
};

struct MetricsReport {
  double hmu = 0.0;
  double hmu_stderr = 0.0;
  std::string hmu_method;  // closed-form, msp or blackwell
  std::optional<double> cmu;  // empty when divergent
  double dmu = 0.0;
  std::optional<DimensionFit> dmu_fit;
  Cardinality cardinality = Cardinality::Finite;
  std::optional<MspKind> msp_kind;
  std::size_t msp_states = 0;
  double msp_leak = 0.0;
  std::vector<SeriesPoint> series;
  std::size_t sample_size = 0;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
};

MetricsReport compute_metrics(const LabeledHMC& hmc, const MetricsConfig& config);

// A single Blackwell trajectory serves both estimators.
struct SampledEstimates {
  EntropyRateEstimate hmu;
  DimensionFit dmu;
};

SampledEstimates sampled_estimates(const LabeledHMC& hmc, std::size_t length, std::size_t sample,
                                   std::size_t burn_in, std::uint64_t seed, std::span<const double> eps,
                                   bool want_dimension = true);

}  // namespace qssp
