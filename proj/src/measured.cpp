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

#include "qssp/measured.hpp"

#include <algorithm>
#include <cmath>

namespace qssp {

std::vector<std::string> validate_source(const CCQS& source) {
  if (source.quantum_alphabet.size() != source.hmc.alphabet_size())
    throw Error(ErrorCode::AlphabetMismatch, "every symbol needs exactly one quantum state");
  validate(source.hmc).throw_if_invalid();
  std::vector<std::string> warnings;
  if (!unifilarity(source.hmc).unifilar) warnings.emplace_back("controller is nonunifilar");
  return warnings;
}

MeasuredHMC derive_measured_hmc(const CCQS& source, const Measurement& m, Provenance provenance) {
  const LabeledHMC& q = source.hmc;
  if (source.quantum_alphabet.size() != q.alphabet_size())
    throw Error(ErrorCode::AlphabetMismatch, "every symbol needs exactly one quantum state");
  const std::size_t n = q.num_states();
  std::vector<Matrix> labeled(m.size(), Matrix(n, n));
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t r = 0; r < q.alphabet_size(); ++r) {
      const double p = outcome_probability(m.operators()[x], source.quantum_alphabet[r]);
      if (p == 0.0) continue;
      const Matrix& t = q.labeled(r);
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t u = 0; u < n; ++u) labeled[x](s, u) += t(s, u) * p;
    }
  // Prune ghost edges, then restore the source row sums.
  for (std::size_t s = 0; s < n; ++s) {
    double kept = 0.0;
    for (auto& t : labeled)
      for (std::size_t u = 0; u < n; ++u) {
        if (t(s, u) < kZeroProbability) t(s, u) = 0.0;
        kept += t(s, u);
      }
    const double target = sum(q.internal().row(s));
    if (kept > 0.0 && kept != target)
      for (auto& t : labeled)
        for (std::size_t u = 0; u < n; ++u) t(s, u) *= target / kept;
  }
  if (provenance.source.empty()) provenance.source = source.id;
  if (provenance.measurement.empty()) provenance.measurement = std::string(to_string(m.kind()));
  return {LabeledHMC(q.states(), m.labels(), std::move(labeled)), std::move(provenance)};
}

namespace {

BlochVector cross(const BlochVector& u, const BlochVector& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double norm3(const BlochVector& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

BlochAngles memoryless_angles(const QubitPureState& rho_a, const QubitPureState& rho_b,
                              double gamma) {
  if (trace_distance(rho_a, rho_b) <= 1e-9)
    throw Error(ErrorCode::IdenticalStates, "memoryless basis needs two distinct states");
  const BlochVector ra = rho_a.bloch(), rb = rho_b.bloch();
  BlochVector axis{ra[0] - rb[0], ra[1] - rb[1], ra[2] - rb[2]};
  const double alen = norm3(axis);
  for (double& v : axis) v /= alen;
  BlochVector n{ra[0] + rb[0], ra[1] + rb[1], ra[2] + rb[2]};
  double len = norm3(n);
  if (len < 1e-9) {
    // Antipodal states: any direction perpendicular to the axis works; prefer the equator.
    const BlochVector z{0.0, 0.0, 1.0};
    n = cross(z, axis);
    if (norm3(n) < 1e-9) n = {1.0, 0.0, 0.0};
    n = cross(axis, n);
    len = norm3(n);
  }
  for (double& v : n) v /= len;
  const BlochVector w = cross(axis, n);
  const double c = std::cos(gamma), s = std::sin(gamma);
  return angles_of({c * n[0] + s * w[0], c * n[1] + s * w[1], c * n[2] + s * w[2]});
}

Measurement memoryless_basis(const QubitPureState& rho_a, const QubitPureState& rho_b,
                             double gamma) {
  const BlochAngles a = memoryless_angles(rho_a, rho_b, gamma);
  return projective_basis(a.theta, a.phi);
}

PreservationReport unifilarity_preservation_check(const CCQS& source, const Measurement& m) {
  const LabeledHMC& q = source.hmc;
  const std::size_t n = q.num_states();
  PreservationReport report;
  for (std::size_t s = 0; s < n; ++s) {
    StatePreservation st;
    st.state = s;
    std::vector<std::size_t> targets;
    for (std::size_t u = 0; u < n; ++u)
      if (q.internal()(s, u) > kZeroProbability) targets.push_back(u);
    st.targets = targets.size();
    st.single_target = targets.size() == 1;
    st.at_most_two_targets = targets.size() <= 2;

    st.orthogonal_emissions = st.at_most_two_targets;
    if (targets.size() == 2)
      for (std::size_t r1 = 0; r1 < q.alphabet_size(); ++r1)
        for (std::size_t r2 = 0; r2 < q.alphabet_size(); ++r2) {
          if (!(q.labeled(r1)(s, targets[0]) > kZeroProbability &&
                q.labeled(r2)(s, targets[1]) > kZeroProbability))
            continue;
          const double overlap =
              std::norm(source.quantum_alphabet[r1].inner(source.quantum_alphabet[r2]));
          if (overlap > kZeroProbability) st.orthogonal_emissions = false;
        }

    st.aligned_measurement = true;
    for (std::size_t x = 0; x < m.size() && st.aligned_measurement; ++x) {
      std::size_t reached = 0;
      for (std::size_t u : targets) {
        double w = 0.0;
        for (std::size_t r = 0; r < q.alphabet_size(); ++r)
          w += q.labeled(r)(s, u) * outcome_probability(m.operators()[x], source.quantum_alphabet[r]);
        if (w >= kZeroProbability) ++reached;
      }
      st.aligned_measurement = reached <= 1;
    }
    st.predicts_unifilar =
        st.single_target || (st.at_most_two_targets && st.orthogonal_emissions && st.aligned_measurement);
    report.predicts_unifilar = report.predicts_unifilar && st.predicts_unifilar;
    report.states.push_back(st);
  }
  return report;
}

bool is_memoryless(const LabeledHMC& hmc, double tol) {
  const std::size_t n = hmc.num_states();
  for (std::size_t x = 0; x < hmc.alphabet_size(); ++x) {
    // p_x from the first state with outgoing mass.
    const double p = hmc.emission_probability(0, x) / sum(hmc.internal().row(0));
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t u = 0; u < n; ++u)
        if (std::abs(hmc.labeled(x)(s, u) - p * hmc.internal()(s, u)) > tol) return false;
  }
  return true;
}

}  // namespace qssp
