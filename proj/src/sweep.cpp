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

#include "qssp/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "qssp/parallel.hpp"
#include "qssp/random.hpp"

namespace qssp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Baseline generator_baseline(const CCQS& source) {
  const LabeledHMC& g = source.hmc;
  if (unifilarity(g).unifilar)
    return {entropy_rate_unifilar(g), state_entropy(minimize_unifilar(g, g.num_states(), 1e-12))};
  return {transition_entropy(g), state_entropy(g)};
}

SweepRow evaluate_measurement(const CCQS& source, const Measurement& m, const EstimatorConfig& config,
                              std::uint64_t seed) {
  SweepRow row;
  try {
    const MeasuredHMC measured = derive_measured_hmc(source, m);
    const LabeledHMC& hmc = measured.hmc;
    const MixedStatePresentation msp = build_msp(hmc, config.msp);
    row.msp_kind = std::string(to_string(msp.kind));
    row.cardinality = msp.cardinality;
    row.msp_states = msp.size();
    const bool sampled = msp.kind == MspKind::Sampled;
    const SampledEstimates est = sampled_estimates(hmc, config.length, config.sample, config.burn_in, seed,
                                                   config.eps, sampled);
    row.hmu = est.hmu.hmu;
    row.hmu_stderr = est.hmu.standard_error;
    if (sampled) {
      row.structure_metric = est.dmu.error ? "dmu_lowfit" : "dmu";
      row.structure_value = est.dmu.dmu;
      row.fit_r2 = est.dmu.r2;
    } else {
      row.structure_metric = "cmu";
      row.structure_value = msp_metrics(msp, {msp.size()}).cmu;
    }
  } catch (const Error& e) {
    row.error = std::string(to_string(e.code())) + ": " + e.what();
    row.hmu = row.hmu_stderr = row.structure_value = kNaN;
    row.structure_metric = "error";
    row.msp_kind = std::string(to_string(e.code()));
  }
  return row;
}

SweepRow evaluate_basis(const CCQS& source, double theta, double phi, const EstimatorConfig& config,
                        std::uint64_t seed) {
  SweepRow row = evaluate_measurement(source, projective_basis(theta, phi), config, seed);
  row.theta = theta;
  row.phi = phi;
  return row;
}

namespace {

struct Task {
  double theta;
  double phi;
  std::uint64_t i;
  std::uint64_t j;
};

SweepResult run_tasks(const CCQS& source, const std::vector<Task>& tasks, const EstimatorConfig& config) {
  SweepResult result;
  result.baseline = generator_baseline(source);
  result.rows.resize(tasks.size());
  parallel_for(tasks.size(), config.jobs, [&](std::size_t k) {
    const Task& t = tasks[k];
    result.rows[k] = evaluate_basis(source, t.theta, t.phi, config, derive_seed(config.seed, t.i, t.j));
  });
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.phi != b.phi ? a.phi < b.phi : a.theta < b.theta;
  });
  return result;
}

double grid_theta(std::size_t i, std::size_t n) {
  return kPi * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

SweepResult sweep_theta(const CCQS& source, double phi, std::size_t n, const EstimatorConfig& config,
                        const std::vector<double>& extra_thetas) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "sweep needs at least two theta values");
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < n; ++i) tasks.push_back({grid_theta(i, n), phi, i, 0});
  for (std::size_t a = 0; a < extra_thetas.size(); ++a) tasks.push_back({extra_thetas[a], phi, n + a, 0});
  return run_tasks(source, tasks, config);
}

SweepResult sweep_grid(const CCQS& source, std::size_t n_theta, std::size_t n_phi,
                       const EstimatorConfig& config) {
  if (n_theta < 2 || n_phi < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2x2 points");
  std::vector<Task> tasks;
  for (std::size_t j = 0; j < n_phi; ++j)
    for (std::size_t i = 0; i < n_theta; ++i)
      tasks.push_back({grid_theta(i, n_theta), 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_phi), i, j});
  return run_tasks(source, tasks, config);
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  char buf[512];
  for (const SweepRow& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s,%.17g,%s\n", r.theta, r.phi, r.hmu, r.hmu_stderr,
                  r.structure_metric.c_str(), r.structure_value, r.msp_kind.c_str());
    out += buf;
  }
  return out;
}

CCQS qem0_source(double alpha) {
  Matrix t_psi(2, 2), t_phi(2, 2);
  t_psi(0, 0) = 0.5;
  t_psi(1, 0) = 1.0;
  t_phi(0, 1) = 0.5;
  LabeledHMC hmc({"A", "B"}, {"psi", "phi"}, {t_psi, t_phi});
  return {std::move(hmc), {qubit_from_bloch(alpha, 0.0), qubit_from_bloch(0.0, 0.0)}, "qem0"};
}

std::vector<UsdRow> usd_alpha_study(const std::vector<double>& alphas, std::size_t msp_truncation,
                                    double merge_tol, unsigned jobs) {
  std::vector<UsdRow> rows(alphas.size());
  parallel_for(alphas.size(), jobs, [&](std::size_t k) {
    UsdRow& row = rows[k];
    row.alpha = alphas[k];
    try {
      if (!(alphas[k] > 0.0 && alphas[k] <= kPi))
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, pi]");
      const CCQS source = qem0_source(alphas[k]);
      const Measurement povm = usd_povm(source.quantum_alphabet[0], source.quantum_alphabet[1]);
      const MeasuredHMC measured = derive_measured_hmc(source, povm);
      MspOptions opts;
      opts.merge_tol = merge_tol;
      opts.max_states = msp_truncation;
      const MixedStatePresentation msp = build_msp(measured.hmc, opts);
      row.kind = msp.kind;
      row.msp_states = msp.size();
      const MspMetrics m = msp_metrics(msp, {msp.size()});
      row.hmu = m.hmu;
      row.cmu = m.cmu;
    } catch (const Error& e) {
      row.error = std::string(to_string(e.code())) + ": " + e.what();
      row.hmu = row.cmu = kNaN;
    }
  });
  return rows;
}

namespace {

class Optimizer {
 public:
  Optimizer(const CCQS& source, Objective objective, std::size_t budget, const EstimatorConfig& config)
      : source_(source), objective_(objective), budget_(budget), config_(config) {}

  OptimizeResult run() {
    const std::size_t coarse = budget_ / 2;
    const std::size_t g_phi = std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(static_cast<double>(coarse)) / 2.0));
    const std::size_t m = std::max<std::size_t>(1, (coarse / g_phi - 1) / 4);
    const std::size_t g_theta = 4 * m + 1;

    // Measurements at (theta, phi) and (pi - theta, phi + pi) differ only by outcome labels,
    // so phi ranges over [0, pi).
    std::vector<std::pair<double, double>> grid;
    for (std::size_t j = 0; j < g_phi; ++j)
      for (std::size_t i = 0; i < g_theta; ++i)
        grid.emplace_back(grid_theta(i, g_theta), kPi * static_cast<double>(j) / static_cast<double>(g_phi));
    std::vector<SweepRow> rows(grid.size());
    parallel_for(grid.size(), config_.jobs, [&](std::size_t k) {
      rows[k] = evaluate_basis(source_, grid[k].first, grid[k].second, config_, seed_for(k));
    });
    for (auto& r : rows) result_.trace.push_back({"grid", std::move(r)});

    const SweepRow best = best_row();
    const std::size_t remaining = budget_ - std::min(budget_, result_.trace.size());
    const std::size_t theta_budget = remaining / 2 + remaining % 2;
    const double dtheta = kPi / static_cast<double>(g_theta - 1);
    const double dphi = kPi / static_cast<double>(g_phi);
    golden(true, std::max(0.0, best.theta - dtheta), std::min(kPi, best.theta + dtheta), best.phi, theta_budget);
    const SweepRow after = best_row();
    golden(false, after.phi - dphi, after.phi + dphi, after.theta, budget_ - std::min(budget_, result_.trace.size()));

    const SweepRow final_row = best_row();
    result_.theta = final_row.theta;
    result_.phi = final_row.phi;
    if (objective_ == Objective::MaxHmu) {
      result_.value = final_row.hmu;
      result_.value_stderr = final_row.hmu_stderr;
      result_.mode = "hmu";
    } else {
      result_.value = final_row.structure_value;
      result_.mode = final_row.uncountable() ? "dmu" : "cmu";
    }
    return std::move(result_);
  }

 private:
  std::uint64_t seed_for(std::size_t k) const { return derive_seed(config_.seed, k, 0xa11); }

  // Lexicographic for structure: any finite/countable point beats an uncountable one.
  bool better(const SweepRow& a, const SweepRow& b) const {
    if (a.error || b.error) return !a.error && b.error;
    if (objective_ == Objective::MaxHmu) return a.hmu > b.hmu;
    if (a.uncountable() != b.uncountable()) return !a.uncountable();
    return a.structure_value < b.structure_value;
  }

  SweepRow best_row() const {
    const SweepRow* best = &result_.trace.front().row;
    for (const auto& e : result_.trace)
      if (better(e.row, *best)) best = &e.row;
    return *best;
  }

  double noise(const SweepRow& r) const { return objective_ == Objective::MaxHmu ? r.hmu_stderr : 0.0; }
  double value(const SweepRow& r) const {
    return objective_ == Objective::MaxHmu ? r.hmu : r.structure_value;
  }

  SweepRow eval(bool along_theta, double coord, double fixed, const char* stage) {
    const double theta = along_theta ? coord : fixed;
    const double phi = along_theta ? fixed : coord;
    SweepRow row = evaluate_basis(source_, theta, phi, config_, seed_for(result_.trace.size()));
    result_.trace.push_back({stage, row});
    return row;
  }

  void golden(bool along_theta, double a, double b, double fixed, std::size_t evaluations) {
    if (evaluations < 2 || !(b > a)) return;
    const char* stage = along_theta ? "theta" : "phi";
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    SweepRow fc = eval(along_theta, c, fixed, stage);
    SweepRow fd = eval(along_theta, d, fixed, stage);
    for (std::size_t used = 2; used < evaluations; ++used) {
      if (!fc.error && !fd.error && fc.uncountable() == fd.uncountable() &&
          std::abs(value(fc) - value(fd)) < 3.0 * std::max(noise(fc), noise(fd))) {
        result_.warnings.push_back(std::string("NoisyObjective: ") + stage +
                                   " refinement stopped, variation below 3 standard errors");
        return;
      }
      if (better(fc, fd)) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = eval(along_theta, c, fixed, stage);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = eval(along_theta, d, fixed, stage);
      }
    }
  }

  const CCQS& source_;
  Objective objective_;
  std::size_t budget_;
  const EstimatorConfig& config_;
  OptimizeResult result_;
};

}  // namespace

OptimizeResult optimize_measurement(const CCQS& source, Objective objective, std::size_t budget,
                                    const EstimatorConfig& config) {
  if (budget < 16) throw Error(ErrorCode::InvalidArgument, "optimization budget must be at least 16");
  return Optimizer(source, objective, budget, config).run();
}

}  // namespace qssp
