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
#include <string>
#include <vector>

#include "qssp/measured.hpp"
#include "qssp/metrics.hpp"
#include "qssp/msp.hpp"

namespace qssp {

struct EstimatorConfig {
  std::size_t length = 1'000'000;
  std::size_t burn_in = 10'000;
  std::size_t sample = 2'000'000;
  std::uint64_t seed = 0;
  MspOptions msp;
  std::vector<double> eps = eps_grid();
  unsigned jobs = 1;
};

struct SweepRow {
  double theta = 0.0;
  double phi = 0.0;
  double hmu = 0.0;
  double hmu_stderr = 0.0;
  std::string structure_metric;  // cmu, dmu, dmu_lowfit or error
  double structure_value = 0.0;
  std::string msp_kind;
  Cardinality cardinality = Cardinality::Finite;
  std::size_t msp_states = 0;
  double fit_r2 = 1.0;
  std::optional<std::string> error;

  bool uncountable() const { return structure_metric == "dmu" || structure_metric == "dmu_lowfit"; }
  // Zero for finite and countable presentations.
  double dmu() const { return uncountable() ? structure_value : 0.0; }
};

struct Baseline {
  double hmu = 0.0;
  double cmu = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (phi, theta)
  Baseline baseline;
};

Baseline generator_baseline(const CCQS& source);

// One measurement: Blackwell entropy rate plus Cmu (finite or countable MSP) or dmu.
SweepRow evaluate_basis(const CCQS& source, double theta, double phi, const EstimatorConfig& config,
                        std::uint64_t seed);

SweepRow evaluate_measurement(const CCQS& source, const Measurement& m, const EstimatorConfig& config,
                              std::uint64_t seed);

// theta_i = i*pi/(n-1); extra_thetas are appended as additional rows.
SweepResult sweep_theta(const CCQS& source, double phi, std::size_t n, const EstimatorConfig& config,
                        const std::vector<double>& extra_thetas = {});

// phi_j = 2*pi*j/n_phi.
SweepResult sweep_grid(const CCQS& source, std::size_t n_theta, std::size_t n_phi,
                       const EstimatorConfig& config);

std::string sweep_csv(const SweepResult& result);

inline constexpr const char* kSweepCsvHeader =
    "theta,phi,hmu,hmu_stderr,structure_metric,structure_value,msp_kind";

// Two-state source with |phi> = |0> and |psi> at Bloch angle alpha in the x-z plane.
CCQS qem0_source(double alpha);

struct UsdRow {
  double alpha = 0.0;
  double hmu = 0.0;
  double cmu = 0.0;
  std::size_t msp_states = 0;
  MspKind kind = MspKind::ExactFinite;
  std::optional<std::string> error;
};

std::vector<UsdRow> usd_alpha_study(const std::vector<double>& alphas, std::size_t msp_truncation,
                                    double merge_tol = 1e-9, unsigned jobs = 1);

enum class Objective { MaxHmu, MinStructure };

struct Evaluation {
  std::string stage;  // grid, theta or phi
  SweepRow row;
};

struct OptimizeResult {
  double theta = 0.0;
  double phi = 0.0;
  double value = 0.0;
  double value_stderr = 0.0;
  std::string mode;  // hmu, cmu or dmu
  std::vector<Evaluation> trace;
  std::vector<std::string> warnings;
};

OptimizeResult optimize_measurement(const CCQS& source, Objective objective, std::size_t budget,
                                    const EstimatorConfig& config);

}  // namespace qssp
